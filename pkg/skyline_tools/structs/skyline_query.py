"""
Skyline counting over the base tree.

A query is split into multislabs along the two boundary paths below
the lowest common ancestor of its x-range and processed right to left.
After each multislab the lower y-bound of the remaining query is raised
above the topmost point seen so far, so the per-multislab skylines add
up to the skyline of the whole rectangle.
"""

from dataclasses import dataclass, field
from typing import Callable, List, Optional, Set, Tuple, Union

from skyline_tools.geometry.point_model import (
    EmptyRect,
    QueryRect,
)
from skyline_tools.structs.skyline_tree import SkylineTree, TreeNode


@dataclass
class QueryStats:
    """Per-query instrumentation counters."""

    nodes_visited: Set[int] = field(default_factory=set)
    child_probes: int = 0
    block_scans: int = 0
    resolve_jumps: int = 0
    steps: int = 0

    @property
    def visit_count(self) -> int:
        return len(self.nodes_visited)

    def visit(self, node: TreeNode) -> None:
        self.nodes_visited.add(node.node_id)

    def as_dict(self) -> dict:
        return {
            "nodes_visited": self.visit_count,
            "child_probes": self.child_probes,
            "block_scans": self.block_scans,
            "resolve_jumps": self.resolve_jumps,
            "steps": self.steps,
        }


@dataclass(frozen=True)
class MultislabQuery:
    """Slabs [lo, hi] of a node, list rows [y_bottom, y_top]."""

    node: int
    lo: int
    hi: int
    y_bottom: int
    y_top: int
    phase: str

    @property
    def empty(self) -> bool:
        return self.y_bottom > self.y_top


def clamp_rect(
    tree: SkylineTree, rect: Union[QueryRect, EmptyRect, None]
) -> Optional[Tuple[int, int, int, int]]:
    """Rank bounds clipped to [0, n), or None when nothing remains."""
    if rect is None or isinstance(rect, EmptyRect) or tree.n == 0:
        return None
    r = rect.normalized()
    x1, x2 = max(r.x1, 0), min(r.x2, tree.n - 1)
    y1, y2 = max(r.y1, 0), min(r.y2, tree.n - 1)
    if x1 > x2 or y1 > y2:
        return None
    return x1, x2, y1, y2


def _visit(stats: Optional[QueryStats], node: TreeNode) -> None:
    if stats is not None:
        stats.visit(node)


def _descend(
    tree: SkylineTree,
    start: TreeNode,
    slot: int,
    bottom: int,
    top: int,
    x: int,
    rightward: bool,
    stats: Optional[QueryStats],
) -> List[MultislabQuery]:
    """Multislabs along one boundary path, top-down."""
    found = []
    node = tree.child(start, slot)
    bottom, top = start.succ(bottom, slot), start.pred(top, slot)
    phase = "right" if rightward else "left"
    while True:
        _visit(stats, node)
        s = node.slot_of_x(x)
        child = tree.child(node, s)
        if rightward:
            if x == child.x_hi:
                found.append(
                    MultislabQuery(node.node_id, 1, s, bottom, top, phase)
                )
                return found
            if s > 1:
                found.append(
                    MultislabQuery(
                        node.node_id, 1, s - 1, bottom, top, phase
                    )
                )
        else:
            if x == child.x_lo:
                found.append(
                    MultislabQuery(
                        node.node_id, s, node.degree, bottom, top, phase
                    )
                )
                return found
            if s < node.degree:
                found.append(
                    MultislabQuery(
                        node.node_id,
                        s + 1,
                        node.degree,
                        bottom,
                        top,
                        phase,
                    )
                )
        bottom, top = node.succ(bottom, s), node.pred(top, s)
        node = child


def decompose(
    tree: SkylineTree,
    rect: Union[QueryRect, EmptyRect],
    stats: Optional[QueryStats] = None,
) -> List[MultislabQuery]:
    """
    Splits a rank-space rectangle into multislabs, right to left.

    Each multislab carries the node-local successor of y1 and
    predecessor of y2 as list rows; the lower bound is raised later by
    the query executor.

    Args:
        tree (SkylineTree): The index.
        rect: Rank-space rectangle.
        stats (QueryStats, optional): Receives visited nodes.

    Returns:
        List[MultislabQuery]: Empty when the rectangle selects nothing
        or the tree is a single leaf.
    """
    bounds = clamp_rect(tree, rect)
    if bounds is None or tree.n == 1:
        return []
    x1, x2, y1, y2 = bounds
    node = tree.root
    bottom, top = y1 + 1, y2 + 1
    _visit(stats, node)
    while True:
        a, b = node.slot_of_x(x1), node.slot_of_x(x2)
        if a != b:
            break
        child = tree.child(node, a)
        if child.is_leaf:
            return [
                MultislabQuery(node.node_id, a, a, bottom, top, "middle")
            ]
        bottom, top = node.succ(bottom, a), node.pred(top, a)
        node = child
        _visit(stats, node)

    left_child, right_child = tree.child(node, a), tree.child(node, b)
    first = a if x1 == left_child.x_lo else a + 1
    last = b if x2 == right_child.x_hi else b - 1
    right: List[MultislabQuery] = []
    if last < b:
        right = _descend(tree, node, b, bottom, top, x2, True, stats)
    middle = []
    if first <= last:
        middle = [
            MultislabQuery(
                node.node_id, first, last, bottom, top, "middle"
            )
        ]
    left: List[MultislabQuery] = []
    if first > a:
        left = _descend(tree, node, a, bottom, top, x1, False, stats)
    return list(reversed(right)) + middle + left


def _ancestor_at(
    tree: SkylineTree, node: TreeNode, depth: int
) -> TreeNode:
    while node.depth > depth:
        node = tree.parent(node)
    return node


def carry_rank(
    tree: SkylineTree,
    source: TreeNode,
    index: int,
    target: TreeNode,
    stats: Optional[QueryStats] = None,
) -> int:
    """
    Re-expresses "entries of L_source up to row index" in L_target.

    Moving up uses the select structures of the nodes passed (index
    must then name an actual entry); moving down uses the
    predecessor formula, so the result counts target entries whose y
    does not exceed that of L_source[index].
    """
    depth = min(source.depth, target.depth)
    while True:
        meet_src = _ancestor_at(tree, source, depth)
        meet_dst = _ancestor_at(tree, target, depth)
        if meet_src.node_id == meet_dst.node_id:
            break
        depth -= 1
    meet = meet_src
    node = source
    while node.node_id != meet.node_id:
        index = node.pi.select1(index)
        node = tree.parent(node)
        _visit(stats, node)
    down = []
    walker = target
    while walker.node_id != meet.node_id:
        down.append(walker)
        walker = tree.parent(walker)
    for child in reversed(down):
        index = tree.parent(child).pred(index, child.slot)
        _visit(stats, child)
    return index


class MultislabSolver:
    """
    Block/slab arithmetic of one multislab subquery.

    Splits rows [bottom, top] of a node restricted to slabs [i, j] into
    the top partial block, the whole middle blocks and the bottom
    partial block, and derives the boundary points p1..p4 with slabs
    k1 and k3 that isolate the five independent skyline pieces.
    """

    def __init__(self, tree: SkylineTree, stats: Optional[QueryStats]):
        self.tree = tree
        self.stats = stats
        self.ev = tree.evaluator

    def _scan(self) -> None:
        if self.stats is not None:
            self.stats.block_scans += 1

    def probe(self) -> None:
        if self.stats is not None:
            self.stats.child_probes += 1

    def block_rightmost(self, node, block, b, t, i, j):
        self._scan()
        k = self.ev.rightmost(node.signature(block), b, t, i, j)
        return None if k is None else (block - 1) * node.block_size + k

    def block_topmost(self, node, block, b, t, i, j):
        self._scan()
        k = self.ev.topmost(node.signature(block), b, t, i, j)
        return None if k is None else (block - 1) * node.block_size + k

    def block_skycount(self, node, block, b, t, i, j) -> int:
        self._scan()
        return self.ev.skycount(node.signature(block), b, t, i, j)

    def ms_rightmost(self, node, i, j, b, t):
        if b > t or i > j:
            return None
        self._scan()
        return node.ms_rightmost(i, j, b, t)

    def ms_topmost(self, node, i, j, b, t):
        if b > t or i > j:
            return None
        self._scan()
        return node.ms_topmost(i, j, b, t)

    def ms_skycount(self, node, i, j, b, t) -> int:
        if b > t or i > j:
            return 0
        self._scan()
        return node.ms_skycount(i, j, b, t)

    def topmost(
        self, node: TreeNode, i: int, j: int, bottom: int, top: int
    ) -> Optional[int]:
        """Row of the highest entry of rows [bottom, top] in [i, j]."""
        bb, bt = node.block_of(bottom), node.block_of(top)
        if bb == bt:
            return self.block_topmost(
                node,
                bt,
                node.offset_of(bottom),
                node.offset_of(top),
                i,
                j,
            )
        found = self.block_topmost(
            node, bt, 1, node.offset_of(top), i, j
        )
        if found is None:
            found = self.ms_topmost(node, i, j, bb + 1, bt - 1)
        if found is None:
            found = self.block_topmost(
                node, bb, node.offset_of(bottom), node.block_size, i, j
            )
        return found

    def split(
        self, node: TreeNode, i: int, j: int, bottom: int, top: int
    ) -> dict:
        """
        Boundary points of a multi-block subquery.

        Returns a dict with p1..p4 (rows or None), k1, k3, and the
        row bounds of the slab-k1 and slab-k3 child ranges.
        """
        bb, bt = node.block_of(bottom), node.block_of(top)
        p1 = self.block_rightmost(
            node, bt, 1, node.offset_of(top), i, j
        )
        k1 = i - 1 if p1 is None else node.child_of(p1)
        p2 = p3 = None
        if k1 + 1 <= j:
            p2 = self.ms_topmost(node, k1 + 1, j, bb + 1, bt - 1)
            if p2 is not None:
                p3 = self.ms_rightmost(node, k1 + 1, j, bb + 1, bt - 1)
        k3 = k1 if p3 is None else node.child_of(p3)
        p4 = None
        if k3 + 1 <= j:
            p4 = self.block_topmost(
                node,
                bb,
                node.offset_of(bottom),
                node.block_size,
                k3 + 1,
                j,
            )
        parts = {
            "bb": bb,
            "bt": bt,
            "p1": p1,
            "p2": p2,
            "p3": p3,
            "p4": p4,
            "k1": k1,
            "k3": k3,
        }
        if p3 is not None:
            start = (
                node.succ(p4, k3)
                if p4 is not None
                else node.succ(bottom, k3)
            )
            parts["slab_k3"] = (start, node.pred(p3, k3))
        if p1 is not None:
            if p2 is not None:
                start = node.succ(p2 + 1, k1)
            elif p4 is not None:
                start = node.succ(p4 + 1, k1)
            else:
                start = node.succ(bottom, k1)
            parts["slab_k1"] = (start, node.pred(p1, k1))
        return parts

    def count(
        self, node: TreeNode, i: int, j: int, bottom: int, top: int
    ) -> int:
        bb, bt = node.block_of(bottom), node.block_of(top)
        if bb == bt:
            return self.block_skycount(
                node,
                bt,
                node.offset_of(bottom),
                node.offset_of(top),
                i,
                j,
            )
        parts = self.split(node, i, j, bottom, top)
        k1, k3 = parts["k1"], parts["k3"]
        # (1) top block
        total = self.block_skycount(
            node, bt, 1, node.offset_of(top), i, j
        )
        # (2) whole middle blocks right of slab k1
        if parts["p2"] is not None:
            total += self.ms_skycount(node, k1 + 1, j, bb + 1, bt - 1)
        # (3) bottom block right of slab k3
        if k3 + 1 <= j:
            total += self.block_skycount(
                node,
                bb,
                node.offset_of(bottom),
                node.block_size,
                k3 + 1,
                j,
            )
        # (4) slab k1 between p2 and p1, (5) slab k3 between p4 and p3
        for slab, key in ((k1, "slab_k1"), (k3, "slab_k3")):
            if key not in parts:
                continue
            lo, hi = parts[key]
            self.probe()
            child = self.tree.child(node, slab)
            total += child.skycount_range(lo, hi) - 1
        return total


def walk_plan(
    tree: SkylineTree,
    plan: List[MultislabQuery],
    handle: Callable[[TreeNode, MultislabQuery, int], None],
    solver: MultislabSolver,
    stats: Optional[QueryStats] = None,
) -> None:
    """
    Runs ``handle(node, query, bottom)`` on every nonempty multislab,
    with bottom raised above the topmost entry of the multislabs
    already processed. That entry stays anchored at the node it was
    found in; predecessor counts carried down cannot be carried up.
    """
    ymax: Optional[Tuple[TreeNode, int]] = None
    for query in plan:
        node = tree.node(query.node)
        bottom = query.y_bottom
        if ymax is not None:
            index = carry_rank(tree, ymax[0], ymax[1], node, stats)
            bottom = max(bottom, index + 1)
        if bottom > query.y_top:
            continue
        if stats is not None:
            stats.steps += 1
        handle(node, query, bottom)
        found = solver.topmost(
            node, query.lo, query.hi, bottom, query.y_top
        )
        if found is not None:
            ymax = (node, found)


def count(
    tree: SkylineTree,
    rect: Union[QueryRect, EmptyRect],
    stats: Optional[QueryStats] = None,
) -> int:
    """
    Size of the skyline of the points inside a rank-space rectangle.

    Args:
        tree (SkylineTree): The index.
        rect: Rank-space rectangle, or Empty.
        stats (QueryStats, optional): Instrumentation sink.

    Returns:
        int: |Skyline(P ∩ rect)|.
    """
    bounds = clamp_rect(tree, rect)
    if bounds is None:
        return 0
    if tree.n == 1:
        _visit(stats, tree.root)
        return 1
    plan = decompose(tree, rect, stats)
    solver = MultislabSolver(tree, stats)
    total = 0

    def handle(node: TreeNode, query: MultislabQuery, bottom: int):
        nonlocal total
        total += solver.count(
            node, query.lo, query.hi, bottom, query.y_top
        )

    walk_plan(tree, plan, handle, solver, stats)
    return total
