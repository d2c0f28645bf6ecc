import math

import numpy as np
import orjson
import pytest
from loguru import logger

from skyline_tools.geometry import PointSet, QueryRect
from skyline_tools.structs import (
    build,
    build_ball_inheritance,
    build_space_report,
    run_batch,
    summarize_batch,
)


def _tree(n, delta=3, seed=0):
    ps = PointSet.from_permutation(
        np.random.default_rng(seed).permutation(n).tolist()
    )
    tree = build(ps, delta=delta)
    return tree, build_ball_inheritance(tree)


def _fail_on_negative(value):
    if value < 0:
        raise ValueError(f"negative query {value}")
    return value * 2


@pytest.mark.parametrize("workers", [1, 4])
def test_run_batch_keeps_input_order(workers):
    logger.info(f"Testing run_batch with {workers} workers")
    results = run_batch(list(range(20)), _fail_on_negative, workers)
    assert [e["position"] for e in results] == list(range(20))
    assert [e["result"] for e in results] == [2 * v for v in range(20)]
    assert all(e["status"] == "success" for e in results)
    logger.success("run_batch order test passed!")


def test_run_batch_records_errors():
    results = run_batch([1, -2, 3], _fail_on_negative, workers=2)
    assert [e["status"] for e in results] == [
        "success",
        "error",
        "success",
    ]
    assert "negative query -2" in results[1]["result"]
    summary = summarize_batch(results)
    assert "failed: 1" in summary
    assert "queries: 3" in summary


def test_run_batch_counts_on_shared_tree():
    tree, _ = _tree(200)
    rects = [QueryRect(0, 199, 0, 199), QueryRect(10, 20, 10, 20)]
    sequential = run_batch(rects, tree.count, workers=1)
    threaded = run_batch(rects, tree.count, workers=2)
    assert [e["result"] for e in sequential] == [
        e["result"] for e in threaded
    ]


def test_space_report_totals():
    tree, bi = _tree(1000)
    report = build_space_report(tree, bi)
    assert report.n == 1000
    assert report.delta == 3
    assert report.ball_b == 2
    assert report.height == tree.height
    assert report.structures["ball_inheritance"] == bi.size_bits()
    assert report.total_bits == sum(report.structures.values())
    assert sum(report.levels.values()) == tree.size_bits()
    assert math.isclose(
        report.ratio, report.total_bits / (1000 * math.log2(1000))
    )
    assert report.level_constant > 0


def test_space_report_serializations():
    tree, bi = _tree(50)
    report = build_space_report(tree, bi)
    doc = orjson.loads(report.to_json())
    assert doc["n"] == 50
    assert set(doc["levels"]) == {
        str(d) for d in range(tree.height + 1)
    }
    assert "total_bits" in report.to_text()


def test_space_report_without_resolver():
    tree, _ = _tree(10)
    report = build_space_report(tree)
    assert report.ball_b is None
    assert report.structures["ball_inheritance"] == 0
