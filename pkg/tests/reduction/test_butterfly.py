import itertools

import numpy as np
import pytest
from loguru import logger

from skyline_tools.errors import (
    ParameterError,
    PointValidationError,
    RangeQueryError,
    ReductionInvariantError,
)
from skyline_tools.geometry import QueryRect, RawPoint, oracle_skyline
from skyline_tools.index import SkylineIndex
from skyline_tools.reduction import (
    ButterflyGraph,
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


def test_rev_digits():
    assert rev_digits(6, 2, 3) == 3
    assert rev_digits(0, 2, 3) == 0
    assert rev_digits(5, 3, 2) == 7
    with pytest.raises(RangeQueryError):
        rev_digits(8, 2, 3)
    with pytest.raises(ParameterError):
        rev_digits(0, 1, 3)


def test_graph_edges():
    graph = ButterflyGraph(2, 3)
    edges = list(graph.edges())
    assert len(edges) == graph.num_edges == 48
    assert all(graph.is_edge(*e) for e in edges)
    assert not graph.is_edge(0, 1, 2)
    assert not graph.is_edge(3, 0, 0)


def test_path_edges_follow_sink_digits():
    assert path_edges(2, 3, 1, 6) == [(0, 1, 0), (1, 0, 2), (2, 2, 6)]


def test_edge_rect_examples():
    logger.info("Testing edge_rect on the (2, 3) butterfly")
    rect = edge_rect(2, 3, 0, 1, 0)
    assert rect.as_tuple() == (1, 1, 0, 3)
    for i, j in [(0, 4), (3, 7), (5, 1)]:
        top = edge_rect(2, 3, 2, i, j)
        assert top.x2 - top.x1 + 1 == 4
    with pytest.raises(PointValidationError):
        edge_rect(2, 3, 0, 1, 2)
    logger.success("edge_rect examples passed!")


def test_transform_pi():
    moved = transform_pi(QueryRect(1, 1, 0, 1), 0, 3)
    assert moved.as_tuple() == (5, 5, 0, 5)
    top = transform_pi(QueryRect(0, 3, 2, 2), 2, 3)
    assert (top.x1, top.y1) == (0, 8)


@pytest.mark.parametrize("b,d", [(2, 1), (2, 2), (2, 3), (3, 2)])
def test_path_membership_law(b, d):
    graph = ButterflyGraph(b, d)
    for s, t in itertools.product(range(graph.width), repeat=2):
        on_path = set(path_edges(b, d, s, t))
        stab = RawPoint(s, rev_digits(t, b, d))
        for edge in graph.edges():
            assert edge_rect(b, d, *edge).contains(stab) == (
                edge in on_path
            ), (s, t, edge)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_corner_skyline_exhaustive(d):
    logger.info(f"Testing stabbing corners for B=2, d={d}")
    family = build_rectangle_family(2, d)
    corners = family.corners()
    assert len(set(corners)) == len(corners)
    width = 2**d
    for x, y in itertools.product(range(width), repeat=2):
        assert len(family.stabbing(x, y)) == d
        assert corner_skyline_check(family, corners, x, y)
    logger.success(f"stabbing corners d={d} passed!")


def test_query_corner():
    assert query_corner(2, 3, 1, 6) == (11, 23)


def test_build_points_doubling():
    graph = ButterflyGraph(2, 2)
    full = build_points(full_subgraph(graph))
    assert len(full.points) == graph.num_edges
    assert all(marked for *_, marked in full.provenance)
    empty = build_points(empty_subgraph(graph))
    assert len(empty.points) == 2 * graph.num_edges
    limit = 2 * 2 * graph.width
    assert all(
        0 <= p.x < limit and 0 <= p.y < limit for p in empty.points
    )
    assert len(set(empty.points)) == len(empty.points)


def test_bfs_reachability_fixtures():
    graph = ButterflyGraph(2, 3)
    full, empty = full_subgraph(graph), empty_subgraph(graph)
    for s, t in itertools.product(range(graph.width), repeat=2):
        assert bfs_reachable(full, s, t)
        assert not bfs_reachable(empty, s, t)


def test_full_path_and_dropped_edge():
    logger.info("Testing the s=001, t=110 scenario")
    graph = ButterflyGraph(2, 3)
    s, t = 0b001, 0b110
    full = build_points(full_subgraph(graph))
    index = SkylineIndex.build(full.points)
    assert reach_via_skyline(full, index, s, t)
    assert index.count(full.query_rect(s, t)) == 3

    edge_b = path_edges(2, 3, s, t)[1]
    assert edge_b == (1, 0b000, 0b010)
    cut = full_subgraph(graph).drop([edge_b])
    inst = build_points(cut)
    index = SkylineIndex.build(inst.points)
    assert not reach_via_skyline(inst, index, s, t)
    sky = oracle_skyline(inst.points, inst.query_rect(s, t))
    assert len(sky) == 4
    assert not bfs_reachable(cut, s, t)
    logger.success("dropped-edge scenario passed!")


def test_punctured_subgraph_cuts_exactly_one_pair_per_layer():
    graph = ButterflyGraph(2, 2)
    g = punctured_subgraph(graph, 2, 1, layer=0)
    assert g.edge_count == graph.num_edges - 1
    assert not bfs_reachable(g, 2, 1)
    assert bfs_reachable(g, 2, 0)


@pytest.mark.parametrize("b,d,seed", [(2, 3, 0), (2, 4, 1), (3, 2, 2)])
def test_three_deciders_agree(b, d, seed):
    graph = ButterflyGraph(b, d)
    g = random_subgraph(graph, 0.75, seed)
    inst = build_points(g)
    index = SkylineIndex.build(inst.points)
    family = build_rectangle_family(b, d)
    reachable = 0
    for s, t in itertools.product(range(graph.width), repeat=2):
        truth = bfs_reachable(g, s, t)
        reachable += truth
        assert reach_via_stabbing(g, s, t, family) == truth
        assert reach_via_skyline(inst, index, s, t) == truth
    logger.info(f"{reachable} reachable pairs for B={b}, d={d}")


@pytest.mark.slow
@pytest.mark.parametrize("p", [0.3, 0.7, 1.0])
@pytest.mark.parametrize("b,d", [(2, 1), (2, 2), (2, 3), (3, 2)])
def test_skyline_decider_on_many_subgraphs(b, d, p):
    logger.info(f"Testing 100 subgraphs B={b}, d={d}, p={p}")
    graph = ButterflyGraph(b, d)
    pairs = list(itertools.product(range(graph.width), repeat=2))
    for seed in range(100):
        g = random_subgraph(graph, p, seed)
        inst = build_points(g)
        index = SkylineIndex.build(inst.points)
        for s, t in pairs:
            assert index.count(inst.query_rect(s, t)) >= d
            assert reach_via_skyline(inst, index, s, t) == (
                bfs_reachable(g, s, t)
            ), (seed, s, t)
    logger.success(f"B={b}, d={d}, p={p} passed!")


def test_random_subgraph_rejects_bad_probability():
    with pytest.raises(ParameterError):
        random_subgraph(ButterflyGraph(2, 2), 1.5)


def test_reach_via_skyline_flags_short_counts():
    class Broken:
        def count(self, rect):
            return 0

    inst = build_points(full_subgraph(ButterflyGraph(2, 2)))
    with pytest.raises(ReductionInvariantError):
        reach_via_skyline(inst, Broken(), 0, 0)


def test_random_subgraph_is_seeded():
    graph = ButterflyGraph(2, 3)
    a = random_subgraph(graph, 0.5, seed=4)
    b = random_subgraph(graph, 0.5, seed=4)
    assert np.array_equal(a.present, b.present)
