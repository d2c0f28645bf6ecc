"""
Skyline reporting.

Each multislab of a query is reported bottom-up by repeatedly taking
the rightmost point above the last one reported, which yields the
skyline in decreasing x. Reported entries are list rows of some tree
node; the ball-inheritance arrays translate them to root rows, and the
root row of a point is its y-rank.
"""

from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple, Union

import numpy as np
from loguru import logger

from skyline_tools.errors import (
    ContainerFormatError,
    ParameterError,
    RangeQueryError,
)
from skyline_tools.geometry.point_model import (
    EmptyRect,
    PointSet,
    QueryRect,
    RawPoint,
    RankSpacePoint,
)
from skyline_tools.structs.skyline_query import (
    MultislabQuery,
    MultislabSolver,
    QueryStats,
    clamp_rect,
    decompose,
    walk_plan,
)
from skyline_tools.structs.skyline_tree import SkylineTree, TreeNode
from skyline_tools.succinct.bitvector import SparseBitVector
from skyline_tools.succinct.packed_array import PackedArray, bits_for

Entry = Tuple[int, int]


def jump_levels(depth: int, b: int) -> List[int]:
    """Exponents i with b**i dividing a positive depth."""
    levels = [0]
    step = b
    while depth % step == 0:
        levels.append(len(levels))
        step *= b
    return levels


def jump_target(depth: int, b: int, i: int) -> int:
    """Depth of the nearest strict ancestor at a multiple of b**(i+1)."""
    stride = b ** (i + 1)
    return ((depth - 1) // stride) * stride


@dataclass
class JumpArray:
    """Select structure from L_source into L_target."""

    source: int
    target: int
    level: int
    vector: SparseBitVector


class BallInheritance:
    """
    Jump arrays for every node and every exponent i with B^i dividing
    the node's depth, plus the root row to x-rank map.

    Args:
        b (int): Fan parameter, at least 2.
        root (int): Root node id.
        n (int): Number of points.
        jumps (Dict[int, List[JumpArray]]): Per node, ordered by i.
        x_of_y (PackedArray): x-rank of root row y + 1.
    """

    def __init__(
        self,
        b: int,
        root: int,
        n: int,
        jumps: Dict[int, List[JumpArray]],
        x_of_y: PackedArray,
    ):
        self.b = b
        self.root = root
        self.n = n
        self.jumps = jumps
        self.x_of_y = x_of_y

    def node_size(self, node_id: int) -> int:
        if node_id == self.root:
            return self.n
        return self.jumps[node_id][0].vector.ones

    def arrays(self) -> Iterator[JumpArray]:
        for node_id in sorted(self.jumps):
            yield from self.jumps[node_id]

    def size_bits(self) -> int:
        return self.x_of_y.size_bits() + sum(
            jump.vector.size_bits() for jump in self.arrays()
        )

    def max_jumps(self, height: int) -> int:
        """Upper bound on jumps for a tree of the given height."""
        bound, reach = 1, self.b
        while reach < height:
            reach *= self.b
            bound += 1
        return bound + 1

    def write_to(self, writer) -> None:
        writer.u32(self.b)
        writer.u64(self.root)
        writer.u64(self.n)
        arrays = list(self.arrays())
        writer.u64(len(arrays))
        for jump in arrays:
            writer.u64(jump.source)
            writer.u64(jump.target)
            writer.u32(jump.level)
            jump.vector.write_to(writer)
        self.x_of_y.write_to(writer)

    @classmethod
    def read_from(cls, reader) -> "BallInheritance":
        b = reader.u32()
        if b < 2:
            raise ContainerFormatError(f"stored ball B {b} < 2")
        root = reader.u64()
        n = reader.u64()
        jumps: Dict[int, List[JumpArray]] = {}
        for _ in range(reader.u64()):
            source = reader.u64()
            target = reader.u64()
            level = reader.u32()
            vector = SparseBitVector.read_from(reader)
            jumps.setdefault(source, []).append(
                JumpArray(source, target, level, vector)
            )
        x_of_y = PackedArray.read_from(reader)
        if len(x_of_y) != n:
            raise ContainerFormatError("root map length mismatch")
        return cls(b, root, n, jumps, x_of_y)


def _root_order(tree: SkylineTree) -> np.ndarray:
    """x-ranks of the root list, rebuilt bottom-up from pi."""
    lists: Dict[int, np.ndarray] = {}
    for node in tree.nodes:
        if node.is_leaf:
            lists[node.node_id] = np.array(
                [node.x_lo], dtype=np.int64
            )
            continue
        merged = np.empty(node.size, dtype=np.int64)
        for slot in range(1, node.degree + 1):
            child = tree.child(node, slot)
            merged[child.pi.one_positions() - 1] = lists.pop(
                child.node_id
            )
        lists[node.node_id] = merged
    return lists[tree.root.node_id]


def build_ball_inheritance(
    tree: SkylineTree, b: int = 2
) -> BallInheritance:
    """
    Builds the jump arrays of a tree and attaches them as its resolver.

    Args:
        tree (SkylineTree): A populated tree.
        b (int): Fan parameter; 2 minimizes space, larger values cut
            the jumps per resolved point.

    Returns:
        BallInheritance: The resolver.

    Raises:
        ParameterError: If b < 2.
    """
    if b < 2:
        raise ParameterError(
            f"ball-inheritance B must be >= 2, got {b}"
        )
    if tree.n == 0:
        bi = BallInheritance(b, 0, 0, {}, PackedArray.from_values([]))
        tree.resolver = bi
        return bi
    jumps: Dict[int, List[JumpArray]] = {}
    ups = {
        node.node_id: node.pi.one_positions()
        for node in tree.nodes
        if node.pi is not None
    }
    for node in tree.nodes:
        if node.parent is None:
            continue
        wanted: Dict[int, List[int]] = {}
        for i in jump_levels(node.depth, b):
            target = jump_target(node.depth, b, i)
            wanted.setdefault(target, []).append(i)
        lowest = min(wanted)
        positions = np.arange(1, node.size + 1, dtype=np.int64)
        walker = node
        while walker.depth > lowest:
            positions = ups[walker.node_id][positions - 1]
            walker = tree.parent(walker)
            for i in wanted.get(walker.depth, []):
                jumps.setdefault(node.node_id, []).append(
                    JumpArray(
                        node.node_id,
                        walker.node_id,
                        i,
                        SparseBitVector.from_positions(
                            positions, walker.size
                        ),
                    )
                )
    for arrays in jumps.values():
        arrays.sort(key=lambda jump: jump.level)
    order = _root_order(tree)
    x_of_y = PackedArray.from_values(
        order, width=max(1, bits_for(tree.n - 1))
    )
    bi = BallInheritance(b, tree.root.node_id, tree.n, jumps, x_of_y)
    tree.resolver = bi
    logger.info(
        f"Built ball inheritance: B={b},"
        f" arrays={sum(len(a) for a in jumps.values())},"
        f" bits={bi.size_bits()}"
    )
    return bi


def resolve(
    bi: BallInheritance,
    v: Union[TreeNode, int],
    idx: int,
    stats: Optional[QueryStats] = None,
) -> RankSpacePoint:
    """
    The point stored at row idx of L_v.

    Each step uses the node's highest jump array, so the target depth
    is divisible by a strictly larger power of B than the source's.

    Raises:
        RangeQueryError: If idx is outside [1, n_v].
    """
    node_id = v.node_id if isinstance(v, TreeNode) else v
    size = bi.node_size(node_id)
    if not 1 <= idx <= size:
        raise RangeQueryError(
            f"list index {idx} outside [1, {size}] at node {node_id}"
        )
    while node_id != bi.root:
        jump = bi.jumps[node_id][-1]
        idx = jump.vector.select1(idx)
        node_id = jump.target
        if stats is not None:
            stats.resolve_jumps += 1
    y = idx - 1
    return RankSpacePoint(bi.x_of_y.get(y), y)


@dataclass
class ReportOutput:
    """Skyline points in decreasing x (increasing y)."""

    points: List[RankSpacePoint] = field(default_factory=list)
    raw: Optional[List[RawPoint]] = None

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.raw if self.raw is not None else self.points)

    def is_staircase(self) -> bool:
        return all(
            a.x > b.x and a.y < b.y
            for a, b in zip(self.points, self.points[1:])
        )

    def with_raw(self, ps: PointSet) -> "ReportOutput":
        return ReportOutput(
            self.points, [ps.to_raw(p) for p in self.points]
        )


class MultislabReporter:
    """Emits the skyline rows of one multislab bottom-up."""

    def __init__(self, tree: SkylineTree, solver: MultislabSolver):
        self.tree = tree
        self.solver = solver
        self.stats = solver.stats

    def _step(self) -> None:
        if self.stats is not None:
            self.stats.steps += 1

    def in_block(self, node, block, b, t, i, j) -> Iterator[Entry]:
        base = (block - 1) * node.block_size
        while b <= t:
            row = self.solver.block_rightmost(node, block, b, t, i, j)
            if row is None:
                return
            self._step()
            yield node.node_id, row
            b = row - base + 1

    def in_child(self, node, slab, lo, anchor) -> Iterator[Entry]:
        """Rightmost chain of child rows [lo, anchor), cut at anchor."""
        child = self.tree.child(node, slab)
        while lo <= anchor:
            self.solver.probe()
            row = child.rightmost(lo, anchor)
            if row == anchor:
                return
            self._step()
            yield child.node_id, row
            lo = row + 1

    def _beaten_by(self, node, f: int, nxt: int) -> bool:
        """Whether row nxt (higher) lies right of row f."""
        cf, cn = node.child_of(f), node.child_of(nxt)
        if cf != cn:
            return cf < cn
        child = self.tree.child(node, cf)
        a, b = node.pred(f, cf), node.pred(nxt, cf)
        return child.rightmost(a, b) == b

    def middle(self, node, i, j, bb, bt) -> Iterator[Entry]:
        """Skyline of whole blocks bb..bt restricted to slabs [i, j]."""
        q = self.solver.ms_rightmost(node, i, j, bb, bt)
        while q is not None:
            block = node.block_of(q)
            nxt = self.solver.ms_rightmost(node, i, j, block + 1, bt)
            self._step()
            yield node.node_id, q
            base = (block - 1) * node.block_size
            length = min(node.block_size, node.size - base)
            start = q - base + 1
            while start <= length:
                f = self.solver.block_rightmost(
                    node, block, start, length, i, j
                )
                if f is None:
                    break
                if nxt is not None and self._beaten_by(node, f, nxt):
                    break
                self._step()
                yield node.node_id, f
                start = f - base + 1
            q = nxt

    def rows(
        self, node: TreeNode, i: int, j: int, bottom: int, top: int
    ) -> Iterator[Entry]:
        bb, bt = node.block_of(bottom), node.block_of(top)
        ob, ot = node.offset_of(bottom), node.offset_of(top)
        if bb == bt:
            yield from self.in_block(node, bt, ob, ot, i, j)
            return
        parts = self.solver.split(node, i, j, bottom, top)
        k1, k3 = parts["k1"], parts["k3"]
        # (3) bottom block, right of slab k3
        if k3 + 1 <= j:
            yield from self.in_block(
                node, bb, ob, node.block_size, k3 + 1, j
            )
        # (5) slab k3 below p3
        if "slab_k3" in parts:
            lo, hi = parts["slab_k3"]
            yield from self.in_child(node, k3, lo, hi)
        # (2) whole middle blocks, right of slab k1
        if parts["p2"] is not None:
            yield from self.middle(node, k1 + 1, j, bb + 1, bt - 1)
        # (4) slab k1 below p1
        if "slab_k1" in parts:
            lo, hi = parts["slab_k1"]
            yield from self.in_child(node, k1, lo, hi)
        # (1) top block
        yield from self.in_block(node, bt, 1, ot, i, j)


def report_entries(
    tree: SkylineTree,
    rect: Union[QueryRect, EmptyRect],
    stats: Optional[QueryStats] = None,
) -> List[Entry]:
    """Skyline as (node id, list row) pairs, decreasing x."""
    bounds = clamp_rect(tree, rect)
    if bounds is None:
        return []
    if tree.n == 1:
        return [(tree.root.node_id, 1)]
    solver = MultislabSolver(tree, stats)
    reporter = MultislabReporter(tree, solver)
    entries: List[Entry] = []

    def handle(node: TreeNode, query: MultislabQuery, bottom: int):
        entries.extend(
            reporter.rows(node, query.lo, query.hi, bottom, query.y_top)
        )

    plan = decompose(tree, rect, stats)
    walk_plan(tree, plan, handle, solver, stats)
    return entries


def report(
    tree: SkylineTree,
    bi: Optional[BallInheritance],
    rect: Union[QueryRect, EmptyRect],
    stats: Optional[QueryStats] = None,
) -> ReportOutput:
    """
    Reports Skyline(P ∩ rect) in decreasing x.

    Args:
        tree (SkylineTree): The index.
        bi (BallInheritance, optional): Resolver; defaults to the one
            attached to the tree.
        rect: Rank-space rectangle, or Empty.
        stats (QueryStats, optional): Instrumentation sink.

    Returns:
        ReportOutput: The skyline points.
    """
    bi = bi if bi is not None else tree.resolver
    if bi is None:
        raise ParameterError(
            "reporting needs a ball-inheritance resolver;"
            " call build_ball_inheritance first"
        )
    points = [
        resolve(bi, node_id, row, stats)
        for node_id, row in report_entries(tree, rect, stats)
    ]
    return ReportOutput(points)
