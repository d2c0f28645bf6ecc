from skyline_tools.reduction.butterfly import (
    ButterflyGraph,
    FamilyRect,
    RectangleFamily,
    ReductionInstance,
    Subgraph,
    bfs_reachable,
    build_points,
    build_rectangle_family,
    corner_skyline_check,
    edge_rect,
    empty_subgraph,
    full_subgraph,
    path_edges,
    punctured_subgraph,
    query_corner,
    random_subgraph,
    reach_via_skyline,
    reach_via_stabbing,
    rev_digits,
    transform_pi,
)

__all__ = [
    "ButterflyGraph",
    "FamilyRect",
    "RectangleFamily",
    "ReductionInstance",
    "Subgraph",
    "bfs_reachable",
    "build_points",
    "build_rectangle_family",
    "edge_rect",
    "empty_subgraph",
    "full_subgraph",
    "corner_skyline_check",
    "path_edges",
    "punctured_subgraph",
    "query_corner",
    "random_subgraph",
    "reach_via_skyline",
    "reach_via_stabbing",
    "rev_digits",
    "transform_pi",
]
