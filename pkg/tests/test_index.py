import math

import numpy as np
import pytest
from loguru import logger

from skyline_tools import SkylineIndex, load_config
from skyline_tools.cli.workloads import (
    random_permutation_points,
    random_rects,
)
from skyline_tools.errors import PointValidationError
from skyline_tools.geometry import Empty, QueryRect, RawPoint, oracle_skyline
from skyline_tools.structs import QueryStats, run_batch


def _raw_points(n, seed):
    rng = np.random.default_rng(seed)
    xs = rng.integers(-1000, 1000, size=n)
    ys = rng.integers(-1000, 1000, size=n)
    return sorted({RawPoint(int(x), int(y)) for x, y in zip(xs, ys)})


def test_antichain_example():
    index = SkylineIndex.build([(1, 3), (2, 2), (3, 1)])
    assert index.count((0, 5, 0, 5)) == 3
    assert index.report((0, 5, 0, 5)) == [
        RawPoint(3, 1),
        RawPoint(2, 2),
        RawPoint(1, 3),
    ]


def test_raw_queries_match_oracle_with_repeated_coordinates():
    logger.info("Testing SkylineIndex on raw points with shared x/y")
    points = _raw_points(400, 1)
    index = SkylineIndex.build(points, load_config(delta=3))
    rng = np.random.default_rng(2)
    for _ in range(300):
        x1, x2 = sorted(int(v) for v in rng.integers(-1100, 1100, 2))
        y1, y2 = sorted(int(v) for v in rng.integers(-1100, 1100, 2))
        rect = QueryRect(x1, x2, y1, y2)
        expected = oracle_skyline(points, rect)
        assert index.count(rect) == len(expected)
        assert index.report(rect) == expected
        assert index.oracle_report(rect) == expected
    logger.success("raw query test passed!")


def test_empty_and_reversed_rects():
    index = SkylineIndex.build([(0, 0), (5, 5)])
    assert index.count(Empty) == 0
    assert index.report(Empty) == []
    assert index.count((6, 9, 0, 9)) == 0
    assert index.count((5, 0, 5, 0)) == 1


def test_duplicate_points_rejected():
    with pytest.raises(PointValidationError):
        SkylineIndex.build([(1, 1), (1, 1)])


def test_stats_collection():
    index = SkylineIndex.build(
        _raw_points(300, 3), load_config(delta=2)
    )
    stats = QueryStats()
    index.count((-2000, 2000, -2000, 2000), stats)
    assert 1 <= stats.visit_count <= 2 * index.tree.height + 1
    assert stats.steps >= 1
    report_stats = QueryStats()
    out = index.report_output((-500, 500, -500, 500), report_stats)
    assert out.is_staircase()
    bound = index.ball.max_jumps(index.tree.height)
    assert report_stats.resolve_jumps <= bound * len(out)

    value, own = index.count_with_stats((-2000, 2000, -2000, 2000))
    assert value == index.count((-2000, 2000, -2000, 2000))
    assert own.visit_count == stats.visit_count
    points, own = index.report_with_stats((-500, 500, -500, 500))
    assert len(points) == len(out)
    assert own.resolve_jumps == report_stats.resolve_jumps


def test_stats_are_per_call_under_threads():
    index = SkylineIndex.build(
        _raw_points(500, 6), load_config(delta=2)
    )
    rects = random_rects(index.points.raw_points(), 64, 7)
    expected = [index.count_with_stats(r)[1].as_dict() for r in rects]
    results = run_batch(rects, index.count_with_stats, workers=4)
    assert [e["position"] for e in results] == list(range(len(rects)))
    for entry, want in zip(results, expected):
        assert entry["status"] == "success"
        _, stats = entry["result"]
        assert stats.as_dict() == want


def test_auto_ball_b_and_params():
    index = SkylineIndex.build(
        _raw_points(256, 5), load_config(ball_b=0, epsilon=1.0)
    )
    assert index.ball.b == 8
    params = index.params()
    assert params["n"] == index.n
    assert params["ball_b"] == 8
    assert params["delta"] == index.tree.delta


def test_bytes_round_trip_answers_identically():
    points = _raw_points(200, 6)
    index = SkylineIndex.build(points, load_config(delta=3))
    loaded = SkylineIndex.from_bytes(index.to_bytes())
    assert loaded.n == index.n
    for rect in [(-1000, 0, -1000, 1000), (-50, 700, 100, 900)]:
        assert loaded.count(rect) == index.count(rect)
        assert loaded.report(rect) == index.report(rect)


def test_single_and_empty_indexes():
    single = SkylineIndex.build([(7, -3)])
    assert single.count((7, 7, -3, -3)) == 1
    assert single.report((0, 10, -5, 0)) == [RawPoint(7, -3)]
    empty = SkylineIndex.build([])
    assert empty.count((0, 1, 0, 1)) == 0
    assert empty.report((0, 1, 0, 1)) == []


@pytest.fixture(scope="module")
def growth_indexes():
    config = load_config(delta=2)
    return {
        n: SkylineIndex.build(random_permutation_points(n, n), config)
        for n in (2**12, 2**14, 2**16)
    }


@pytest.mark.slow
def test_node_visits_grow_logarithmically(growth_indexes):
    means = []
    for n, index in sorted(growth_indexes.items()):
        bound = 2 * math.ceil(math.log(n, index.tree.delta)) + 3
        visits = []
        for rect in random_rects(index.points.raw_points(), 200, n):
            stats = QueryStats()
            index.count(rect, stats)
            assert stats.visit_count <= bound
            visits.append(stats.visit_count)
        means.append(float(np.mean(visits)))
        logger.info(f"n={n}: mean visits {means[-1]:.2f}")
    for smaller, larger in zip(means, means[1:]):
        assert larger <= 1.3 * smaller


@pytest.mark.slow
def test_space_ratio_stays_flat(growth_indexes):
    small = growth_indexes[2**12].space_report()
    large = growth_indexes[2**16].space_report()
    logger.info(f"space ratio {small.ratio:.2f} -> {large.ratio:.2f}")
    assert large.ratio <= 1.5 * small.ratio
    for report in (small, large):
        per_level = (
            report.level_constant * report.n * math.log2(report.delta)
        )
        for bits in report.levels.values():
            assert bits <= per_level + 1e-6
        assert report.total_bits == sum(report.structures.values())
