"""
Degree-Delta base tree over x-sorted rank-space points.

Every internal node keeps the y-sorted list of its subtree points
only implicitly, through the succinct structures built here:

- ``child_index``: child slab of each list entry, packed.
- ``pi`` (on the child): select from a child's list into its parent's.
- ``signatures``: (slab, within-slab x-rank) pairs, grouped in blocks
  of Delta^2 entries.
- ``block_counts``: per child, prefix sums of its per-block entry
  counts.
- ``rightmost_rmq``: range-max over the x-ranks of the list.
- ``dominated``: prefix sums of how many prefix-skyline points each
  entry dominates.
- ``multislabs``: per slab interval [i, j], block-level range-max
  structures and prefix sums of block skyline sizes and cross-block
  domination counts.
"""

from bisect import bisect_right
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
from loguru import logger

from skyline_tools.config import default_delta
from skyline_tools.errors import (
    ContainerFormatError,
    ParameterError,
    RangeQueryError,
)
from skyline_tools.geometry.point_model import PointSet
from skyline_tools.structs.block_signature import (
    BlockEvaluator,
    BlockSignature,
    rank_width,
    slab_width,
)
from skyline_tools.succinct.bitvector import SparseBitVector
from skyline_tools.succinct.packed_array import PackedArray
from skyline_tools.succinct.prefix_sums import (
    MonotoneSequence,
    build_prefix_sums,
)
from skyline_tools.succinct.range_max import RangeMaxStructure

STRUCTURE_KINDS = (
    "child_index",
    "parent_select",
    "signatures",
    "prefix_sums",
    "range_max",
    "multislab",
)


@dataclass
class MultislabStructures:
    """Block-level structures of one slab interval [i, j]."""

    rightmost: RangeMaxStructure
    topmost: RangeMaxStructure
    sky: MonotoneSequence
    cross: MonotoneSequence

    def size_bits(self) -> int:
        return (
            self.rightmost.size_bits()
            + self.topmost.size_bits()
            + self.sky.size_bits()
            + self.cross.size_bits()
        )


class TreeNode:
    """
    One node of the base tree. Leaves hold a single point; list
    positions, child slabs and block numbers are 1-based.
    """

    def __init__(
        self,
        node_id: int,
        size: int,
        x_lo: int,
        x_hi: int,
        delta: int,
        evaluator: BlockEvaluator,
    ):
        self.node_id = node_id
        self.size = size
        self.x_lo = x_lo
        self.x_hi = x_hi
        self.delta = delta
        self.evaluator = evaluator
        self.depth = 0
        self.parent: Optional[int] = None
        self.slot = 0
        self.children: List[int] = []
        self.child_x_lo: List[int] = []
        self.pi: Optional[SparseBitVector] = None
        self.child_index: Optional[PackedArray] = None
        self.signatures: Optional[PackedArray] = None
        self.block_counts: List[MonotoneSequence] = []
        self.rightmost_rmq: Optional[RangeMaxStructure] = None
        self.dominated: Optional[MonotoneSequence] = None
        self.multislabs: Dict[Tuple[int, int], MultislabStructures] = (
            {}
        )
        self.lists: Optional[np.ndarray] = None

    def __repr__(self) -> str:
        return (
            f"TreeNode(id={self.node_id}, depth={self.depth},"
            f" x=[{self.x_lo},{self.x_hi}], n={self.size})"
        )

    @property
    def is_leaf(self) -> bool:
        return not self.children

    @property
    def degree(self) -> int:
        return len(self.children)

    @property
    def block_size(self) -> int:
        return self.delta * self.delta

    @property
    def num_blocks(self) -> int:
        return -(-self.size // self.block_size)

    def _check_index(self, t: int) -> None:
        if not 1 <= t <= self.size:
            raise RangeQueryError(
                f"list index {t} outside [1, {self.size}] at node"
                f" {self.node_id}"
            )

    def _check_slab(self, i: int) -> None:
        if not 1 <= i <= self.degree:
            raise RangeQueryError(
                f"slab {i} outside [1, {self.degree}] at node"
                f" {self.node_id}"
            )

    def slot_of_x(self, x: int) -> int:
        """Child slab whose x-interval contains x-rank x."""
        return bisect_right(self.child_x_lo, x)

    def child_size(self, i: int) -> int:
        return self.block_counts[i - 1].total

    def child_of(self, t: int) -> int:
        """C_v[t]: the slab holding L_v[t]."""
        self._check_index(t)
        return self.child_index.get(t - 1) + 1

    def block_of(self, t: int) -> int:
        return (t - 1) // self.block_size + 1

    def offset_of(self, t: int) -> int:
        return (t - 1) % self.block_size + 1

    def signature(self, block: int) -> BlockSignature:
        if not 1 <= block <= self.num_blocks:
            raise RangeQueryError(
                f"block {block} outside [1, {self.num_blocks}]"
            )
        start = (block - 1) * self.block_size
        stop = min(start + self.block_size, self.size)
        return BlockSignature.decode(
            self.signatures.get_span(start, stop),
            stop - start,
            self.delta,
        )

    def pred(self, t: int, i: int) -> int:
        """Number of slab-i entries among L_v[1..t]; t = 0 gives 0."""
        self._check_slab(i)
        if t == 0:
            return 0
        self._check_index(t)
        block = self.block_of(t)
        return self.block_counts[i - 1].prefix(
            block - 1
        ) + self.evaluator.below(
            self.signature(block), self.offset_of(t), i
        )

    def succ(self, t: int, i: int) -> int:
        """
        First slab-i entry at or above L_v[t]; t = n_v + 1 and empty
        answers give n_{c_i} + 1.
        """
        self._check_slab(i)
        if t == self.size + 1:
            return self.child_size(i) + 1
        below = self.pred(t, i)
        return below if self.child_of(t) == i else below + 1

    def rightmost(self, i: int, j: int) -> int:
        if not 1 <= i <= j <= self.size:
            raise RangeQueryError(
                f"range [{i}, {j}] outside [1, {self.size}]"
            )
        if self.is_leaf:
            return i
        return self.rightmost_rmq.range_max_index(i, j)

    def skycount_prefix(self, i: int) -> int:
        self._check_index(i)
        if self.is_leaf:
            return 1
        return i - self.dominated.prefix(i)

    def skycount_range(self, i: int, j: int) -> int:
        k = self.rightmost(i, j)
        return self.skycount_prefix(j) - self.skycount_prefix(k) + 1

    def _multislab(self, i: int, j: int) -> MultislabStructures:
        if not 1 <= i <= j <= self.degree:
            raise RangeQueryError(
                f"slab interval [{i}, {j}] outside [1, {self.degree}]"
            )
        return self.multislabs[(i, j)]

    def _check_blocks(self, b: int, t: int) -> None:
        if not 1 <= b <= t <= self.num_blocks:
            raise RangeQueryError(
                f"block range [{b}, {t}] outside"
                f" [1, {self.num_blocks}]"
            )

    def ms_rightmost(
        self, i: int, j: int, b: int, t: int
    ) -> Optional[int]:
        structures = self._multislab(i, j)
        self._check_blocks(b, t)
        block = structures.rightmost.range_max_index(b, t)
        sig = self.signature(block)
        k = self.evaluator.rightmost(sig, 1, len(sig), i, j)
        if k is None:
            return None
        return (block - 1) * self.block_size + k

    def ms_topmost(
        self, i: int, j: int, b: int, t: int
    ) -> Optional[int]:
        structures = self._multislab(i, j)
        self._check_blocks(b, t)
        block = structures.topmost.range_max_index(b, t)
        sig = self.signature(block)
        k = self.evaluator.topmost(sig, 1, len(sig), i, j)
        if k is None:
            return None
        return (block - 1) * self.block_size + k

    def ms_skycount(self, i: int, j: int, b: int, t: int) -> int:
        structures = self._multislab(i, j)
        r = self.ms_rightmost(i, j, b, t)
        if r is None:
            return 0
        k = self.block_of(r)
        return structures.sky.range_sum(
            k, t
        ) - structures.cross.range_sum(k + 1, t)

    def size_breakdown(self) -> Dict[str, int]:
        sizes = {kind: 0 for kind in STRUCTURE_KINDS}
        if self.pi is not None:
            sizes["parent_select"] = self.pi.size_bits()
        if self.is_leaf:
            return sizes
        sizes["child_index"] = self.child_index.size_bits()
        sizes["signatures"] = self.signatures.size_bits()
        sizes["prefix_sums"] = self.dominated.size_bits() + sum(
            seq.size_bits() for seq in self.block_counts
        )
        sizes["range_max"] = self.rightmost_rmq.size_bits()
        sizes["multislab"] = sum(
            ms.size_bits() for ms in self.multislabs.values()
        )
        return sizes

    def size_bits(self) -> int:
        return sum(self.size_breakdown().values())

    # -- persistence -----------------------------------------------

    def write_to(self, writer) -> None:
        writer.u64(self.size)
        writer.u64(self.x_lo)
        writer.u64(self.x_hi)
        writer.u32(self.depth)
        writer.i64(-1 if self.parent is None else self.parent)
        writer.u32(self.slot)
        writer.int_array(np.asarray(self.children, dtype=np.int64))
        writer.u8(0 if self.pi is None else 1)
        if self.pi is not None:
            self.pi.write_to(writer)
        if self.is_leaf:
            return
        self.child_index.write_to(writer)
        self.signatures.write_to(writer)
        for seq in self.block_counts:
            seq.write_to(writer)
        self.rightmost_rmq.write_to(writer)
        self.dominated.write_to(writer)
        for key in sorted(self.multislabs):
            ms = self.multislabs[key]
            ms.rightmost.write_to(writer)
            ms.topmost.write_to(writer)
            ms.sky.write_to(writer)
            ms.cross.write_to(writer)

    @classmethod
    def read_from(
        cls,
        reader,
        node_id: int,
        delta: int,
        evaluator: BlockEvaluator,
    ) -> "TreeNode":
        size = reader.u64()
        x_lo = reader.u64()
        x_hi = reader.u64()
        node = cls(node_id, size, x_lo, x_hi, delta, evaluator)
        node.depth = reader.u32()
        parent = reader.i64()
        node.parent = None if parent < 0 else parent
        node.slot = reader.u32()
        node.children = [int(c) for c in reader.int_array()]
        if reader.u8():
            node.pi = SparseBitVector.read_from(reader)
        if node.is_leaf:
            return node
        node.child_index = PackedArray.read_from(reader)
        node.signatures = PackedArray.read_from(reader)
        node.block_counts = [
            MonotoneSequence.read_from(reader)
            for _ in range(node.degree)
        ]
        node.rightmost_rmq = RangeMaxStructure.read_from(reader)
        node.dominated = MonotoneSequence.read_from(reader)
        for i in range(1, node.degree + 1):
            for j in range(i, node.degree + 1):
                node.multislabs[(i, j)] = MultislabStructures(
                    rightmost=RangeMaxStructure.read_from(reader),
                    topmost=RangeMaxStructure.read_from(reader),
                    sky=MonotoneSequence.read_from(reader),
                    cross=MonotoneSequence.read_from(reader),
                )
        return node


class SkylineTree:
    """
    The base tree plus the block evaluator shared by its nodes.

    Attributes:
        n (int): Number of points.
        delta (int): Maximum degree.
        nodes (List[TreeNode]): Leaves first (leaf k holds x-rank k),
            then internal nodes level by level; the root is last.
        height (int): Edges on a root-to-leaf path.
        materialized (bool): Whether test lists were kept.
        resolver: Ball-inheritance resolver attached by the reporting
            layer.
    """

    def __init__(
        self,
        n: int,
        delta: int,
        nodes: List[TreeNode],
        memo_capacity: int = 0,
        materialized: bool = False,
    ):
        self.n = n
        self.delta = delta
        self.nodes = nodes
        self.memo_capacity = memo_capacity
        self.materialized = materialized
        self.resolver = None
        self.evaluator = (
            nodes[0].evaluator if nodes else BlockEvaluator(memo_capacity)
        )
        self.height = 0 if not nodes else max(
            node.depth for node in nodes
        )

    @property
    def root(self) -> Optional[TreeNode]:
        return self.nodes[-1] if self.nodes else None

    def node(self, node_id: int) -> TreeNode:
        return self.nodes[node_id]

    def child(self, node: TreeNode, slot: int) -> TreeNode:
        return self.nodes[node.children[slot - 1]]

    def parent(self, node: TreeNode) -> TreeNode:
        return self.nodes[node.parent]

    def leaf(self, x: int) -> TreeNode:
        return self.nodes[x]

    def internal_nodes(self) -> List[TreeNode]:
        return [node for node in self.nodes if not node.is_leaf]

    def levels(self) -> Dict[int, List[TreeNode]]:
        grouped: Dict[int, List[TreeNode]] = {}
        for node in self.nodes:
            grouped.setdefault(node.depth, []).append(node)
        return grouped

    def size_breakdown(self) -> Dict[str, int]:
        totals = {kind: 0 for kind in STRUCTURE_KINDS}
        for node in self.nodes:
            for kind, bits in node.size_breakdown().items():
                totals[kind] += bits
        return totals

    def size_bits(self) -> int:
        return sum(self.size_breakdown().values())

    def count(self, rect, stats=None) -> int:
        from skyline_tools.structs.skyline_query import count

        return count(self, rect, stats)

    def decompose(self, rect, stats=None):
        from skyline_tools.structs.skyline_query import decompose

        return decompose(self, rect, stats)

    def write_to(self, writer) -> None:
        writer.u64(self.n)
        writer.u32(self.delta)
        writer.u64(len(self.nodes))
        for node in self.nodes:
            node.write_to(writer)

    @classmethod
    def read_from(cls, reader, memo_capacity: int = 0) -> "SkylineTree":
        n = reader.u64()
        delta = reader.u32()
        count = reader.u64()
        if delta < 2:
            raise ContainerFormatError(f"stored delta {delta} < 2")
        evaluator = BlockEvaluator(memo_capacity)
        nodes = [
            TreeNode.read_from(reader, k, delta, evaluator)
            for k in range(count)
        ]
        for node in nodes:
            node.child_x_lo = [nodes[c].x_lo for c in node.children]
        return cls(n, delta, nodes, memo_capacity=memo_capacity)


def _dominated_counts(xs: np.ndarray) -> List[int]:
    """For each entry, the prefix-skyline points it dominates."""
    stack: List[int] = []
    counts = []
    for x in xs.tolist():
        popped = 0
        while stack and stack[-1] < x:
            stack.pop()
            popped += 1
        stack.append(x)
        counts.append(popped)
    return counts


def _build_multislabs(
    xs: np.ndarray,
    slabs: np.ndarray,
    block_id: np.ndarray,
    num_blocks: int,
    degree: int,
    block_size: int,
) -> Dict[Tuple[int, int], MultislabStructures]:
    block_max = np.full((degree, num_blocks), -1, dtype=np.int64)
    np.maximum.at(block_max, (slabs, block_id), xs)
    x_list, slab_list = xs.tolist(), slabs.tolist()
    blocks = [
        list(
            zip(
                x_list[b * block_size : (b + 1) * block_size],
                slab_list[b * block_size : (b + 1) * block_size],
            )
        )
        for b in range(num_blocks)
    ]
    numbering = np.arange(1, num_blocks + 1, dtype=np.int64)
    result = {}
    for i in range(1, degree + 1):
        for j in range(i, degree + 1):
            rightmost = block_max[i - 1 : j].max(axis=0) + 1
            topmost = np.where(rightmost > 0, numbering, 0)
            sky, cross = [], []
            stack: List[int] = []
            for entries in blocks:
                inside = [x for x, c in entries if i - 1 <= c < j]
                block_sky = []
                best = -1
                for x in reversed(inside):
                    if x > best:
                        block_sky.append(x)
                        best = x
                sky.append(len(block_sky))
                popped = 0
                if inside:
                    while stack and stack[-1] < best:
                        stack.pop()
                        popped += 1
                    stack.extend(reversed(block_sky))
                cross.append(popped)
            result[(i, j)] = MultislabStructures(
                rightmost=RangeMaxStructure.build(rightmost),
                topmost=RangeMaxStructure.build(topmost),
                sky=build_prefix_sums(sky),
                cross=build_prefix_sums(cross),
            )
    return result


def _populate(
    node: TreeNode,
    group: List[Tuple[TreeNode, np.ndarray]],
    ys: np.ndarray,
) -> np.ndarray:
    """Fills an internal node from its children; returns its list."""
    delta = node.delta
    children = [child for child, _ in group]
    lists = [lst for _, lst in group]
    degree = len(children)
    merged = np.concatenate(lists)
    owner = np.repeat(
        np.arange(degree, dtype=np.int64), [lst.size for lst in lists]
    )
    order = np.argsort(ys[merged], kind="stable")
    xs = merged[order]
    slabs = owner[order]
    size = int(xs.size)
    block_size = delta * delta

    node.children = [child.node_id for child in children]
    node.child_x_lo = [child.x_lo for child in children]
    for slot, child in enumerate(children, start=1):
        child.parent = node.node_id
        child.slot = slot
        child.pi = SparseBitVector.from_positions(
            np.flatnonzero(slabs == slot - 1) + 1, size
        )
    node.child_index = PackedArray.from_values(
        slabs, width=slab_width(delta)
    )

    positions = np.arange(size, dtype=np.int64)
    block_id = positions // block_size
    num_blocks = int(block_id[-1]) + 1
    by_block_x = np.lexsort((xs, block_id))
    key = block_id[by_block_x] * delta + slabs[by_block_x]
    starts = np.ones(size, dtype=bool)
    starts[1:] = key[1:] != key[:-1]
    first = np.maximum.accumulate(np.where(starts, positions, 0))
    ranks = np.empty(size, dtype=np.int64)
    ranks[by_block_x] = positions - first
    node.signatures = PackedArray.from_values(
        (slabs << rank_width(delta)) | ranks,
        width=BlockSignature.pair_width(delta),
    )

    counts = np.zeros((degree, num_blocks), dtype=np.int64)
    np.add.at(counts, (slabs, block_id), 1)
    node.block_counts = [build_prefix_sums(row) for row in counts]
    node.rightmost_rmq = RangeMaxStructure.build(xs)
    node.dominated = build_prefix_sums(_dominated_counts(xs))
    node.multislabs = _build_multislabs(
        xs, slabs, block_id, num_blocks, degree, block_size
    )
    return xs


def build(
    ps: PointSet,
    delta: Optional[int] = None,
    memo_capacity: int = 0,
    materialize: bool = False,
) -> SkylineTree:
    """
    Builds the base tree bottom-up.

    Args:
        ps (PointSet): Rank-space points.
        delta (int, optional): Maximum degree; defaults to
            max(2, ceil(lg(n) ** 1/4)).
        memo_capacity (int): Block-query memoization capacity.
        materialize (bool): Keep each node's y-sorted list (x-ranks)
            in ``node.lists`` for oracle checks. Test builds only.

    Returns:
        SkylineTree: The populated tree.

    Raises:
        ParameterError: If delta < 2.
    """
    n = ps.n
    if delta is None:
        delta = default_delta(n)
    if delta < 2:
        raise ParameterError(f"delta must be >= 2, got {delta}")
    ys = ps.y_of_x
    evaluator = BlockEvaluator(memo_capacity)
    nodes: List[TreeNode] = []
    level: List[Tuple[TreeNode, np.ndarray]] = []
    for x in range(n):
        leaf = TreeNode(x, 1, x, x, delta, evaluator)
        nodes.append(leaf)
        level.append((leaf, np.array([x], dtype=np.int64)))
    depth = 0
    while len(level) > 1:
        upper: List[Tuple[TreeNode, np.ndarray]] = []
        for g in range(0, len(level), delta):
            group = level[g : g + delta]
            node = TreeNode(
                len(nodes),
                sum(child.size for child, _ in group),
                group[0][0].x_lo,
                group[-1][0].x_hi,
                delta,
                evaluator,
            )
            xs = _populate(node, group, ys)
            nodes.append(node)
            upper.append((node, xs))
        if materialize:
            for child, lst in level:
                child.lists = lst
        level = upper
        depth += 1
        logger.debug(
            f"Built tree level {depth} with {len(level)} nodes"
        )
    if materialize and level:
        level[0][0].lists = level[0][1]
    for node in reversed(nodes):
        if node.parent is not None:
            node.depth = nodes[node.parent].depth + 1
    tree = SkylineTree(
        n,
        delta,
        nodes,
        memo_capacity=memo_capacity,
        materialized=materialize,
    )
    logger.info(
        f"Built skyline tree: n={n}, delta={delta},"
        f" height={tree.height}, nodes={len(nodes)}"
    )
    return tree
