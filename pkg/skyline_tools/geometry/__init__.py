from skyline_tools.geometry.point_model import (
    RANK,
    RAW,
    Empty,
    EmptyRect,
    Point,
    PointSet,
    QueryRect,
    RankSpacePoint,
    RawPoint,
    dominates,
    map_rect,
    oracle_count,
    oracle_skyline,
    rank_reduce,
)

__all__ = [
    "RANK",
    "RAW",
    "Empty",
    "EmptyRect",
    "Point",
    "PointSet",
    "QueryRect",
    "RankSpacePoint",
    "RawPoint",
    "dominates",
    "map_rect",
    "oracle_count",
    "oracle_skyline",
    "rank_reduce",
]
