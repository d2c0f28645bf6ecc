import itertools

import numpy as np
import pytest
from loguru import logger

from skyline_tools.errors import ParameterError, RangeQueryError
from skyline_tools.geometry import (
    Empty,
    PointSet,
    QueryRect,
    RankSpacePoint,
    oracle_skyline,
)
from skyline_tools.structs import (
    QueryStats,
    build,
    build_ball_inheritance,
    count,
    report,
    resolve,
)
from skyline_tools.structs.reporting import jump_levels, jump_target


def _indexed(ys, delta, b=2):
    ps = PointSet.from_permutation(ys)
    tree = build(ps, delta=delta, materialize=True)
    return ps, tree, build_ball_inheritance(tree, b)


def _random(n, delta, seed, b=2):
    rng = np.random.default_rng(seed)
    return _indexed(rng.permutation(n).tolist(), delta, b)


def test_jump_levels_and_targets():
    assert jump_levels(1, 2) == [0]
    assert jump_levels(4, 2) == [0, 1, 2]
    assert jump_levels(6, 3) == [0, 1]
    assert jump_target(1, 2, 0) == 0
    assert jump_target(5, 2, 0) == 4
    assert jump_target(4, 2, 1) == 0
    assert jump_target(12, 2, 1) == 8


@pytest.mark.parametrize("b", [2, 3, 5])
def test_resolve_against_materialized_lists(b):
    logger.info(f"Testing resolve with B={b}")
    ps, tree, bi = _random(243, 3, 1, b)
    for node in tree.nodes:
        for idx, x in enumerate(node.lists.tolist(), start=1):
            stats = QueryStats()
            point = resolve(bi, node, idx, stats)
            assert point == RankSpacePoint(x, int(ps.y_of_x[x]))
            assert stats.resolve_jumps <= bi.max_jumps(tree.height)
    logger.success(f"resolve B={b} test passed!")


def test_resolve_jump_counts():
    ps, tree, bi = _random(16, 4, 0)
    stats = QueryStats()
    resolve(bi, tree.root, 5, stats)
    assert stats.resolve_jumps == 0
    for x in range(16):
        stats = QueryStats()
        resolve(bi, tree.leaf(x), 1, stats)
        assert 1 <= stats.resolve_jumps <= 2
    _, flat, flat_bi = _random(4, 4, 0)
    assert flat.height == 1
    stats = QueryStats()
    resolve(flat_bi, flat.leaf(2), 1, stats)
    assert stats.resolve_jumps == 1


def test_resolve_rejects_bad_index():
    _, tree, bi = _random(16, 4, 0)
    with pytest.raises(RangeQueryError):
        resolve(bi, tree.root, 0)
    with pytest.raises(RangeQueryError):
        resolve(bi, tree.leaf(3), 2)


def test_ball_inheritance_rejects_small_b():
    ps = PointSet.from_permutation([1, 0])
    with pytest.raises(ParameterError):
        build_ball_inheritance(build(ps, delta=2), 1)


@pytest.mark.parametrize(
    "n,delta,b,seed", [(300, 2, 2, 1), (400, 3, 4, 2), (256, 4, 2, 3)]
)
def test_report_matches_oracle(n, delta, b, seed):
    logger.info(f"Testing report on n={n}, delta={delta}, B={b}")
    ps, tree, bi = _random(n, delta, seed, b)
    rng = np.random.default_rng(seed + 100)
    for _ in range(300):
        x1, x2 = sorted(int(v) for v in rng.integers(0, n, size=2))
        y1, y2 = sorted(int(v) for v in rng.integers(0, n, size=2))
        rect = QueryRect(x1, x2, y1, y2)
        out = report(tree, bi, rect)
        assert out.points == oracle_skyline(ps, rect), rect
        assert out.is_staircase()
        assert len(out) == tree.count(rect)
    logger.success("report oracle test passed!")


def _all_rects(n):
    spans = list(itertools.combinations_with_replacement(range(n), 2))
    for (x1, x2), (y1, y2) in itertools.product(spans, spans):
        yield QueryRect(x1, x2, y1, y2)


def _check_all_rects(ps, tree, bi):
    for rect in _all_rects(ps.n):
        out = report(tree, bi, rect)
        assert out.points == oracle_skyline(ps, rect), (
            ps.y_of_x.tolist(),
            rect,
        )
        assert len(out) == count(tree, rect)


@pytest.mark.parametrize("delta", [2, 3])
def test_report_exhaustive_small_grid(delta):
    logger.info(f"Testing every rectangle, n <= 5, delta={delta}")
    for n in range(1, 6):
        for ys in itertools.permutations(range(n)):
            _check_all_rects(*_indexed(list(ys), delta))
    logger.success(f"exhaustive report delta={delta} passed!")


@pytest.mark.parametrize("b", [2, 3, 4, 5])
def test_report_skips_points_below_slab_anchor(b):
    ps, tree, bi = _indexed([5, 0, 3, 1, 2, 6, 4], 2, b)
    rect = QueryRect(1, 6, 0, 4)
    out = report(tree, bi, rect)
    assert out.points == [RankSpacePoint(6, 4)]
    assert len(out) == count(tree, rect) == 1


@pytest.mark.slow
@pytest.mark.parametrize("delta", [2, 3])
def test_report_every_rect_sampled_permutations(delta):
    rng = np.random.default_rng(delta)
    for n in (6, 7, 8):
        for _ in range(20):
            ys = rng.permutation(n).tolist()
            b = int(rng.integers(2, 5))
            _check_all_rects(*_indexed(ys, delta, b))


def test_report_chain_and_antichain():
    n = 60
    _, anti, anti_bi = _indexed(list(reversed(range(n))), 3)
    full = report(anti, anti_bi, QueryRect(0, n - 1, 0, n - 1))
    assert [p.x for p in full.points] == list(reversed(range(n)))
    _, chain, chain_bi = _indexed(list(range(n)), 3)
    out = report(chain, chain_bi, QueryRect(10, 40, 0, 25))
    assert out.points == [RankSpacePoint(25, 25)]


def test_report_degenerate_inputs():
    _, tree, bi = _random(16, 4, 0)
    assert report(tree, bi, Empty).points == []
    _, single, single_bi = _indexed([0], 2)
    assert report(single, single_bi, QueryRect(0, 0, 0, 0)).points == [
        RankSpacePoint(0, 0)
    ]
    _, none_tree, none_bi = _indexed([], 2)
    assert report(none_tree, none_bi, QueryRect(0, 3, 0, 3)).points == []


def test_report_uses_attached_resolver():
    ps = PointSet.from_permutation([2, 0, 1])
    tree = build(ps, delta=2)
    with pytest.raises(ParameterError):
        report(tree, None, QueryRect(0, 2, 0, 2))
    build_ball_inheritance(tree, 2)
    out = report(tree, None, QueryRect(0, 2, 0, 2))
    assert out.points == oracle_skyline(ps, QueryRect(0, 2, 0, 2))


def test_report_output_carries_raw_points():
    ps = PointSet.from_permutation([2, 0, 1])
    tree = build(ps, delta=2)
    bi = build_ball_inheritance(tree)
    out = report(tree, bi, QueryRect(0, 2, 0, 2)).with_raw(ps)
    assert list(out) == [ps.to_raw(p) for p in out.points]


@pytest.mark.slow
def test_report_large_random():
    n = 10_000
    ps, tree, bi = _random(n, 3, 31, 2)
    rng = np.random.default_rng(32)
    for _ in range(300):
        x1, x2 = sorted(int(v) for v in rng.integers(0, n, size=2))
        y1, y2 = sorted(int(v) for v in rng.integers(0, n, size=2))
        rect = QueryRect(x1, x2, y1, y2)
        assert report(tree, bi, rect).points == oracle_skyline(ps, rect)
