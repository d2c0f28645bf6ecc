"""
SkylineIndex: the point model, the base tree and the ball-inheritance
resolver behind one raw-coordinate API.
"""

from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from loguru import logger

from skyline_tools.config import SkylineConfig, load_config
from skyline_tools.geometry.point_model import (
    Empty,
    EmptyRect,
    PointSet,
    QueryRect,
    RawPoint,
    RankSpacePoint,
    map_rect,
    oracle_skyline,
    rank_reduce,
)
from skyline_tools.storage.container import (
    decode_container,
    encode_container,
    load_container,
    save_container,
)
from skyline_tools.structs.reporting import (
    BallInheritance,
    ReportOutput,
    build_ball_inheritance,
    report,
)
from skyline_tools.structs.skyline_query import QueryStats, count
from skyline_tools.structs.skyline_tree import SkylineTree, build
from skyline_tools.structs.space_report import (
    SpaceReport,
    build_space_report,
)

RectLike = Union[QueryRect, EmptyRect, Sequence[int]]


def _as_rect(rect: RectLike) -> Union[QueryRect, EmptyRect]:
    if isinstance(rect, (QueryRect, EmptyRect)):
        return rect
    x1, x2, y1, y2 = rect
    return QueryRect(int(x1), int(x2), int(y1), int(y2))


class SkylineIndex:
    """
    Static skyline counting and reporting index over integer points.

    Example:
        >>> index = SkylineIndex.build([(1, 3), (2, 2), (3, 1)])
        >>> index.count((0, 5, 0, 5))
        3
    """

    def __init__(
        self,
        points: PointSet,
        tree: SkylineTree,
        ball: Optional[BallInheritance],
        config: SkylineConfig,
    ):
        self.points = points
        self.tree = tree
        self.ball = ball
        self.config = config

    @classmethod
    def build(
        cls,
        raw_points: Iterable,
        config: Optional[SkylineConfig] = None,
    ) -> "SkylineIndex":
        """
        Rank-reduces the points and builds the tree and resolver.

        Args:
            raw_points: RawPoint objects or (x, y) pairs.
            config (SkylineConfig, optional): Build parameters;
                defaults to load_config().

        Raises:
            PointValidationError: On duplicate points.
            ParameterError: On invalid delta or ball B.
        """
        config = config or load_config()
        points = rank_reduce(raw_points)
        n = points.n
        tree = build(
            points,
            delta=config.resolve_delta(n),
            memo_capacity=config.memo_cache,
            materialize=config.materialize_lists,
        )
        ball = build_ball_inheritance(tree, config.resolve_ball_b(n))
        logger.success(
            f"Index ready: n={n}, delta={tree.delta}, B={ball.b},"
            f" height={tree.height}"
        )
        return cls(points, tree, ball, config)

    @property
    def n(self) -> int:
        return self.points.n

    def to_rank(self, rect: RectLike) -> Union[QueryRect, EmptyRect]:
        rect = _as_rect(rect)
        if isinstance(rect, EmptyRect):
            return Empty
        return map_rect(self.points, rect)

    def count_rank(
        self, rect: RectLike, stats: Optional[QueryStats] = None
    ) -> int:
        return count(self.tree, _as_rect(rect), stats)

    def report_rank(
        self, rect: RectLike, stats: Optional[QueryStats] = None
    ) -> List[RankSpacePoint]:
        out = report(self.tree, self.ball, _as_rect(rect), stats)
        return out.points

    def count(
        self, rect: RectLike, stats: Optional[QueryStats] = None
    ) -> int:
        """Skyline size inside a raw-coordinate rectangle."""
        return self.count_rank(self.to_rank(rect), stats)

    def report(
        self, rect: RectLike, stats: Optional[QueryStats] = None
    ) -> List[RawPoint]:
        """Skyline inside a raw rectangle, by decreasing x."""
        out = report(self.tree, self.ball, self.to_rank(rect), stats)
        return list(out.with_raw(self.points))

    def count_with_stats(
        self, rect: RectLike
    ) -> Tuple[int, QueryStats]:
        """Count plus the counters of this call alone."""
        stats = QueryStats()
        return self.count(rect, stats), stats

    def report_with_stats(
        self, rect: RectLike
    ) -> Tuple[List[RawPoint], QueryStats]:
        stats = QueryStats()
        return self.report(rect, stats), stats

    def report_output(
        self, rect: RectLike, stats: Optional[QueryStats] = None
    ) -> ReportOutput:
        return report(
            self.tree, self.ball, self.to_rank(rect), stats
        ).with_raw(self.points)

    def oracle_report(self, rect: RectLike) -> List[RawPoint]:
        """Brute-force answer for the same raw rectangle."""
        rect = _as_rect(rect)
        if isinstance(rect, EmptyRect):
            return []
        return oracle_skyline(self.points.raw_points(), rect)

    def space_report(self) -> SpaceReport:
        return build_space_report(self.tree, self.ball)

    def params(self) -> dict:
        return {
            "n": self.n,
            "delta": self.tree.delta,
            "ball_b": None if self.ball is None else self.ball.b,
            "memo_cache": self.config.memo_cache,
            "epsilon": self.config.epsilon,
        }

    def to_bytes(self) -> bytes:
        return encode_container(
            self.params(), self.points, self.tree, self.ball
        )

    @classmethod
    def from_bytes(
        cls, data: bytes, config: Optional[SkylineConfig] = None
    ) -> "SkylineIndex":
        config = config or load_config()
        contents = decode_container(data, config.memo_cache)
        return cls(
            contents.points, contents.tree, contents.ball, config
        )

    def save(self, path: Union[str, Path]) -> int:
        return save_container(
            path, self.params(), self.points, self.tree, self.ball
        )

    @classmethod
    def load(
        cls,
        path: Union[str, Path],
        config: Optional[SkylineConfig] = None,
    ) -> "SkylineIndex":
        config = config or load_config()
        contents = load_container(path, config.memo_cache)
        return cls(
            contents.points, contents.tree, contents.ball, config
        )
