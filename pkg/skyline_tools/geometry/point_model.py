from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger

from skyline_tools.errors import PointValidationError


@dataclass(frozen=True, order=True)
class RawPoint:
    x: int
    y: int


@dataclass(frozen=True, order=True)
class RankSpacePoint:
    x: int
    y: int


Point = Union[RawPoint, RankSpacePoint]

RAW = "raw"
RANK = "rank"


@dataclass(frozen=True)
class QueryRect:
    """Closed rectangle [x1, x2] x [y1, y2], tagged raw or rank."""

    x1: int
    x2: int
    y1: int
    y2: int
    space: str = RAW

    def normalized(self) -> "QueryRect":
        x1, x2 = sorted((self.x1, self.x2))
        y1, y2 = sorted((self.y1, self.y2))
        return QueryRect(x1, x2, y1, y2, self.space)

    def contains(self, p: Point) -> bool:
        return self.x1 <= p.x <= self.x2 and self.y1 <= p.y <= self.y2

    def as_tuple(self) -> Tuple[int, int, int, int]:
        return (self.x1, self.x2, self.y1, self.y2)


class EmptyRect:
    """Marker for a rectangle that selects no point."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "Empty"

    def __bool__(self) -> bool:
        return False


Empty = EmptyRect()


@dataclass
class PointSet:
    """
    Rank-space view of an input point set.

    Attributes:
        y_of_x (np.ndarray): y-rank of the point with x-rank i.
        raw_x (np.ndarray): Raw x of the point with x-rank i.
        raw_y (np.ndarray): Raw y of the point with x-rank i.
        x_keys (np.ndarray): Raw x values ordered by x-rank.
        y_keys (np.ndarray): Raw y values ordered by y-rank.
    """

    y_of_x: np.ndarray
    raw_x: np.ndarray
    raw_y: np.ndarray
    x_keys: np.ndarray
    y_keys: np.ndarray

    @property
    def n(self) -> int:
        return int(self.y_of_x.size)

    def __len__(self) -> int:
        return self.n

    @property
    def points(self) -> List[RankSpacePoint]:
        return [
            RankSpacePoint(i, int(y)) for i, y in enumerate(self.y_of_x)
        ]

    def raw_point(self, x_rank: int) -> RawPoint:
        return RawPoint(
            int(self.raw_x[x_rank]), int(self.raw_y[x_rank])
        )

    def raw_points(self) -> List[RawPoint]:
        return [self.raw_point(i) for i in range(self.n)]

    def to_raw(self, p: RankSpacePoint) -> RawPoint:
        return self.raw_point(p.x)

    def rank_of(self, p: RawPoint) -> RankSpacePoint:
        """Rank-space image of an input point."""
        lo = int(np.searchsorted(self.x_keys, p.x, side="left"))
        hi = int(np.searchsorted(self.x_keys, p.x, side="right"))
        k = lo + int(np.searchsorted(self.raw_y[lo:hi], p.y))
        if k >= hi or int(self.raw_y[k]) != p.y:
            raise PointValidationError(f"{p} is not in the point set")
        return RankSpacePoint(k, int(self.y_of_x[k]))

    @classmethod
    def from_permutation(cls, ys: Sequence[int]) -> "PointSet":
        """Point set whose raw coordinates already are (i, ys[i])."""
        return rank_reduce(
            [RawPoint(i, int(y)) for i, y in enumerate(ys)]
        )


def dominates(p: Point, q: Point) -> bool:
    """True iff q.x <= p.x and q.y <= p.y."""
    return q.x <= p.x and q.y <= p.y


def _as_arrays(raw: Iterable) -> Tuple[np.ndarray, np.ndarray]:
    pts = [
        (int(p[0]), int(p[1]))
        if isinstance(p, tuple)
        else (int(p.x), int(p.y))
        for p in raw
    ]
    if not pts:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty
    arr = np.array(pts, dtype=np.int64)
    return arr[:, 0], arr[:, 1]


def rank_reduce(raw: Iterable) -> PointSet:
    """
    Reduces raw integer points to rank space.

    x-ties are broken by ascending y and y-ties by ascending x, which
    keeps the non-strict dominance relation intact pairwise.

    Args:
        raw: RawPoint objects or (x, y) tuples.

    Returns:
        PointSet: x-sorted rank-space points plus the raw key lists.

    Raises:
        PointValidationError: If two points coincide.
    """
    xs, ys = _as_arrays(raw)
    n = int(xs.size)
    by_x = np.lexsort((ys, xs))
    sx, sy = xs[by_x], ys[by_x]
    if n > 1:
        dup = np.flatnonzero((sx[1:] == sx[:-1]) & (sy[1:] == sy[:-1]))
        if dup.size:
            k = int(dup[0])
            raise PointValidationError(
                f"duplicate point ({int(sx[k])}, {int(sy[k])})"
            )
    by_y = np.lexsort((sx, sy))
    y_of_x = np.empty(n, dtype=np.int64)
    y_of_x[by_y] = np.arange(n, dtype=np.int64)
    logger.debug(f"Rank-reduced {n} points")
    return PointSet(
        y_of_x=y_of_x,
        raw_x=sx,
        raw_y=sy,
        x_keys=sx.copy(),
        y_keys=sy[by_y],
    )


def map_rect(ps: PointSet, r: QueryRect) -> Union[QueryRect, EmptyRect]:
    """
    Maps a raw rectangle to the rank rectangle selecting the same
    points.

    Args:
        ps (PointSet): The reduced point set.
        r (QueryRect): Raw rectangle.

    Returns:
        The rank-space QueryRect, or Empty when no point can lie
        inside.
    """
    r = r.normalized()
    x_lo = int(np.searchsorted(ps.x_keys, r.x1, side="left"))
    x_hi = int(np.searchsorted(ps.x_keys, r.x2, side="right")) - 1
    y_lo = int(np.searchsorted(ps.y_keys, r.y1, side="left"))
    y_hi = int(np.searchsorted(ps.y_keys, r.y2, side="right")) - 1
    if x_lo > x_hi or y_lo > y_hi:
        return Empty
    return QueryRect(x_lo, x_hi, y_lo, y_hi, RANK)


def oracle_skyline(
    ps: Union[PointSet, Sequence[Point]],
    r: Optional[QueryRect] = None,
) -> List[Point]:
    """
    Brute-force skyline of the points inside r.

    Args:
        ps: A PointSet (rank space) or any sequence of points.
        r (QueryRect, optional): Closed query rectangle; None means
            unrestricted.

    Returns:
        List of maximal points by strictly decreasing x.
    """
    pts = ps.points if isinstance(ps, PointSet) else list(ps)
    if r is not None:
        if isinstance(r, EmptyRect):
            return []
        r = r.normalized()
        pts = [p for p in pts if r.contains(p)]
    pts.sort(key=lambda p: (p.x, p.y), reverse=True)
    result: List[Point] = []
    best_y = None
    for p in pts:
        if best_y is None or p.y > best_y:
            result.append(p)
            best_y = p.y
    return result


def oracle_count(
    ps: Union[PointSet, Sequence[Point]],
    r: Optional[QueryRect] = None,
) -> int:
    return len(oracle_skyline(ps, r))
