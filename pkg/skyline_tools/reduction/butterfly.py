"""
Butterfly-graph reachability as two-sided skyline counting.

Every butterfly edge e_k(i, j) becomes a rectangle r_k(i, j) that
contains (s, rev(t)) exactly when the edge lies on the unique s -> t
path. After the pi transform the lower-left corners of the rectangles
stabbed by a point are the skyline of a two-sided query, and a missing
edge splits its corner into two incomparable points. A sink is then
reachable iff the query's skyline has exactly d points.
"""

from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Protocol, Sequence, Tuple

import numpy as np
from loguru import logger

from skyline_tools.errors import (
    ParameterError,
    PointValidationError,
    RangeQueryError,
    ReductionInvariantError,
)
from skyline_tools.geometry.point_model import (
    QueryRect,
    RawPoint,
    oracle_skyline,
)

Edge = Tuple[int, int, int]


def _check_shape(b: int, d: int) -> None:
    if b < 2:
        raise ParameterError(f"butterfly degree B must be >= 2, got {b}")
    if d < 1:
        raise ParameterError(f"butterfly depth d must be >= 1, got {d}")


def digit(v: int, b: int, k: int) -> int:
    """Digit k of v in base b, digit 0 least significant."""
    return (v // b**k) % b


def with_digit(v: int, b: int, k: int, c: int) -> int:
    return v + (c - digit(v, b, k)) * b**k


def rev_digits(t: int, b: int, d: int) -> int:
    """
    Reverses the d base-b digits of t.

    Raises:
        RangeQueryError: If t is outside [0, b**d).
    """
    _check_shape(b, d)
    if not 0 <= t < b**d:
        raise RangeQueryError(f"index {t} outside [0, {b**d})")
    out = 0
    for _ in range(d):
        out = out * b + t % b
        t //= b
    return out


@dataclass(frozen=True)
class ButterflyGraph:
    """
    Layers 0..d of b**d nodes; node (k, i) links to every (k+1, j)
    whose digits differ from i's at most in digit k.
    """

    b: int
    d: int

    def __post_init__(self):
        _check_shape(self.b, self.d)

    @property
    def width(self) -> int:
        return self.b**self.d

    @property
    def num_edges(self) -> int:
        return self.d * self.width * self.b

    def is_edge(self, k: int, i: int, j: int) -> bool:
        if not 0 <= k < self.d:
            return False
        if not (0 <= i < self.width and 0 <= j < self.width):
            return False
        return with_digit(i, self.b, k, digit(j, self.b, k)) == j

    def edges(self) -> Iterator[Edge]:
        for k in range(self.d):
            for i in range(self.width):
                for c in range(self.b):
                    yield k, i, with_digit(i, self.b, k, c)


@dataclass
class Subgraph:
    """
    Edge subset of a butterfly; present[k, i, c] holds for the edge
    from (k, i) that sets digit k to c.
    """

    graph: ButterflyGraph
    present: np.ndarray

    def has_edge(self, k: int, i: int, j: int) -> bool:
        if not self.graph.is_edge(k, i, j):
            return False
        return bool(self.present[k, i, digit(j, self.graph.b, k)])

    def drop(self, edges: Sequence[Edge]) -> "Subgraph":
        present = self.present.copy()
        for k, i, j in edges:
            if not self.graph.is_edge(k, i, j):
                raise PointValidationError(
                    f"e_{k}({i}, {j}) is not a butterfly edge"
                )
            present[k, i, digit(j, self.graph.b, k)] = False
        return Subgraph(self.graph, present)

    @property
    def edge_count(self) -> int:
        return int(self.present.sum())


def _shape(graph: ButterflyGraph) -> Tuple[int, int, int]:
    return graph.d, graph.width, graph.b


def full_subgraph(graph: ButterflyGraph) -> Subgraph:
    return Subgraph(graph, np.ones(_shape(graph), dtype=bool))


def empty_subgraph(graph: ButterflyGraph) -> Subgraph:
    return Subgraph(graph, np.zeros(_shape(graph), dtype=bool))


def random_subgraph(
    graph: ButterflyGraph, p: float, seed: int = 0
) -> Subgraph:
    """Keeps each edge independently with probability p."""
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"retention probability {p} not in [0, 1]")
    rng = np.random.default_rng(seed)
    return Subgraph(graph, rng.random(_shape(graph)) < p)


def punctured_subgraph(
    graph: ButterflyGraph, s: int, t: int, layer: int = 0
) -> Subgraph:
    """Full butterfly minus the layer-``layer`` edge of the s -> t path."""
    return full_subgraph(graph).drop(
        [path_edges(graph.b, graph.d, s, t)[layer]]
    )


def path_edges(b: int, d: int, s: int, t: int) -> List[Edge]:
    """
    The unique s -> t path as edges (k, i, j). The layer-k node keeps
    digits 0..k-1 of t and the remaining digits of s.
    """
    _check_shape(b, d)
    width = b**d
    if not (0 <= s < width and 0 <= t < width):
        raise RangeQueryError(f"(s, t) = ({s}, {t}) outside [0, {width})")
    edges = []
    node = s
    for k in range(d):
        nxt = with_digit(node, b, k, digit(t, b, k))
        edges.append((k, node, nxt))
        node = nxt
    return edges


def edge_rect(b: int, d: int, k: int, i: int, j: int) -> QueryRect:
    """
    Rectangle r_k(i, j): x runs over the values sharing digits
    d-1..k with i; y has the digits 0..k of j, in that order, as its
    most significant digits followed by d-1-k free digits.

    Raises:
        PointValidationError: If e_k(i, j) is not a butterfly edge.
    """
    graph = ButterflyGraph(b, d)
    if not graph.is_edge(k, i, j):
        raise PointValidationError(
            f"e_{k}({i}, {j}) is not an edge of the ({b}, {d}) butterfly"
        )
    x1 = (i // b**k) * b**k
    y_span = b ** (d - 1 - k)
    y1 = rev_digits(j % b ** (k + 1), b, k + 1) * y_span
    return QueryRect(x1, x1 + b**k - 1, y1, y1 + y_span - 1)


def transform_pi(rect: QueryRect, k: int, d: int) -> QueryRect:
    """Scales by d and shifts so corners of different layers separate."""
    return QueryRect(
        d * rect.x1 + (d - 1 - k),
        d * rect.x2 + d - 1,
        d * rect.y1 + k,
        d * rect.y2 + d - 1,
    )


@dataclass(frozen=True)
class FamilyRect:
    k: int
    i: int
    j: int
    rect: QueryRect
    moved: QueryRect

    @property
    def corner(self) -> RawPoint:
        return RawPoint(self.moved.x1, self.moved.y1)


@dataclass
class RectangleFamily:
    b: int
    d: int
    rects: List[FamilyRect] = field(default_factory=list)

    def corners(self) -> List[RawPoint]:
        return [r.corner for r in self.rects]

    def stabbing(self, x: int, y: int) -> List[FamilyRect]:
        p = RawPoint(x, y)
        return [r for r in self.rects if r.rect.contains(p)]


def build_rectangle_family(b: int, d: int) -> RectangleFamily:
    """Every edge rectangle of the (b, d) butterfly, with pi applied."""
    family = RectangleFamily(b, d)
    for k, i, j in ButterflyGraph(b, d).edges():
        rect = edge_rect(b, d, k, i, j)
        family.rects.append(
            FamilyRect(k, i, j, rect, transform_pi(rect, k, d))
        )
    return family


def corner_skyline_check(
    family: RectangleFamily,
    corners: Sequence[RawPoint],
    x: int,
    y: int,
) -> bool:
    """
    Whether the skyline of corners under (-inf, dx+d-1] x (-inf,
    dy+d-1] is exactly the corner set of the rectangles containing
    (x, y).
    """
    d = family.d
    query = QueryRect(0, d * x + d - 1, 0, d * y + d - 1)
    sky = set(oracle_skyline(list(corners), query))
    stabbed = {r.corner for r in family.stabbing(x, y)}
    return sky == stabbed


@dataclass
class ReductionInstance:
    """
    P(G) with the provenance of each point.

    Attributes:
        points (List[RawPoint]): Coordinates in [0, 2 d b**d).
        provenance (List[Tuple[int, int, int, bool]]): (k, i, j,
            marked) of the rectangle each point came from.
    """

    b: int
    d: int
    subgraph: Subgraph
    points: List[RawPoint] = field(default_factory=list)
    provenance: List[Tuple[int, int, int, bool]] = field(
        default_factory=list
    )

    def query_corner(self, s: int, t: int) -> Tuple[int, int]:
        return query_corner(self.b, self.d, s, t)

    def query_rect(self, s: int, t: int) -> QueryRect:
        qx, qy = self.query_corner(s, t)
        return QueryRect(0, qx, 0, qy)


def query_corner(b: int, d: int, s: int, t: int) -> Tuple[int, int]:
    """Upper corner of the two-sided query deciding s -> t."""
    return 2 * d * (s + 1) - 1, 2 * d * (rev_digits(t, b, d) + 1) - 1


def build_points(g: Subgraph) -> ReductionInstance:
    """
    Doubles the pi-moved corners; a marked rectangle keeps one point at
    +(1, 1), an unmarked one becomes +(1, 0) and +(0, 1).
    """
    b, d = g.graph.b, g.graph.d
    inst = ReductionInstance(b, d, g)
    for k, i, j in g.graph.edges():
        moved = transform_pi(edge_rect(b, d, k, i, j), k, d)
        cx, cy = 2 * moved.x1, 2 * moved.y1
        if g.has_edge(k, i, j):
            inst.points.append(RawPoint(cx + 1, cy + 1))
            inst.provenance.append((k, i, j, True))
        else:
            inst.points.append(RawPoint(cx + 1, cy))
            inst.points.append(RawPoint(cx, cy + 1))
            inst.provenance.append((k, i, j, False))
            inst.provenance.append((k, i, j, False))
    logger.debug(
        f"Built P(G) for B={b}, d={d}: {len(inst.points)} points,"
        f" {g.edge_count} of {g.graph.num_edges} edges present"
    )
    return inst


class CountsRawRects(Protocol):
    def count(self, rect: QueryRect) -> int: ...


def reach_via_skyline(
    inst: ReductionInstance,
    index: CountsRawRects,
    s: int,
    t: int,
) -> bool:
    """
    Decides s -> t reachability with one skyline count.

    Args:
        inst (ReductionInstance): P(G).
        index: Anything answering count() over raw rectangles of P(G),
            typically a SkylineIndex.
        s (int): Source index.
        t (int): Sink index.

    Raises:
        ReductionInvariantError: If the count is below d.
    """
    found = index.count(inst.query_rect(s, t))
    if found < inst.d:
        raise ReductionInvariantError(
            f"skyline count {found} < d={inst.d} for (s, t) = ({s}, {t})"
        )
    return found == inst.d


def bfs_reachable(g: Subgraph, s: int, t: int) -> bool:
    """Layer-by-layer forward search from source s."""
    b, d = g.graph.b, g.graph.d
    frontier = {s}
    for k in range(d):
        frontier = {
            with_digit(i, b, k, c)
            for i in frontier
            for c in range(b)
            if g.present[k, i, c]
        }
        if not frontier:
            return False
    return t in frontier


def reach_via_stabbing(
    g: Subgraph, s: int, t: int, family: Optional[RectangleFamily] = None
) -> bool:
    """t is reachable iff (s, rev(t)) is stabbed by d marked rectangles."""
    b, d = g.graph.b, g.graph.d
    family = family or build_rectangle_family(b, d)
    marked = sum(
        1
        for r in family.stabbing(s, rev_digits(t, b, d))
        if g.has_edge(r.k, r.i, r.j)
    )
    return marked == d
