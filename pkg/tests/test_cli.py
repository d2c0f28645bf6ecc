import orjson
import pytest
from loguru import logger

from skyline_tools.cli import main
from skyline_tools.cli.workloads import (
    read_points_file,
    read_queries_file,
    verify_workload,
)
from skyline_tools.errors import InputParseError
from skyline_tools.geometry import QueryRect, RawPoint, oracle_skyline
from skyline_tools.index import SkylineIndex

POINTS = [(1, 3), (2, 2), (3, 1), (0, 0), (4, 4)]
QUERIES = [(0, 3, 0, 3), (0, 4, 0, 4), (10, 20, 10, 20)]


@pytest.fixture
def workspace(tmp_path):
    points = tmp_path / "points.txt"
    points.write_text(
        "# x y\n" + "".join(f"{x} {y}\n" for x, y in POINTS)
    )
    queries = tmp_path / "queries.txt"
    queries.write_text(
        "".join(" ".join(map(str, q)) + "\n" for q in QUERIES)
    )
    index = tmp_path / "index.skyc"
    assert main(
        ["build", str(points), "--output", str(index), "--delta", "2"]
    ) == 0
    return tmp_path, points, queries, index


def test_count_and_report(workspace):
    logger.info("Testing the count and report commands")
    tmp_path, _, queries, index = workspace
    counts = tmp_path / "counts.txt"
    assert main(
        ["count", str(index), str(queries), "--output", str(counts)]
    ) == 0
    assert counts.read_text().split() == ["3", "1", "0"]

    reports = tmp_path / "reports.txt"
    assert main(
        [
            "report",
            str(index),
            str(queries),
            "--workers",
            "2",
            "--output",
            str(reports),
        ]
    ) == 0
    assert reports.read_text().splitlines() == [
        "3 1;2 2;1 3",
        "4 4",
        "",
    ]
    logger.success("count and report commands passed!")


def test_count_stats_flag(workspace, capsys):
    _, _, queries, index = workspace
    assert main(["count", str(index), str(queries), "--stats"]) == 0
    assert capsys.readouterr().out.split() == ["3", "1", "0"]


def test_space_json(workspace):
    tmp_path, _, _, index = workspace
    out = tmp_path / "space.json"
    assert main(["space", str(index), "--json", "--output", str(out)]) == 0
    doc = orjson.loads(out.read_text())
    assert doc["n"] == len(POINTS)
    assert doc["delta"] == 2


def test_verify_modes(workspace):
    _, points, queries, _ = workspace
    assert main(["verify", str(points), str(queries), "--reports"]) == 0
    assert main(["verify", "--random", "300", "200", "--seed", "4"]) == 0
    assert main(
        ["verify", "--butterfly", "--depth", "3", "--drop-prob", "0.3"]
    ) == 0


def test_verify_reports_injected_fault(workspace, monkeypatch):
    _, points, queries, _ = workspace
    real_count = SkylineIndex.count

    def off_by_one(self, rect, stats=None):
        return real_count(self, rect, stats) + 1

    monkeypatch.setattr(SkylineIndex, "count", off_by_one)
    assert main(["verify", str(points), str(queries)]) == 1


def test_verify_without_inputs_is_an_error():
    assert main(["verify"]) == 2


def test_strict_and_lenient_parsing(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("1 2\nthree 4\n5 6 7\n8 9\n")
    index = tmp_path / "index.skyc"
    assert main(["build", str(bad), "--output", str(index)]) == 2
    assert not index.exists()
    assert main(
        ["build", str(bad), "--output", str(index), "--no-strict"]
    ) == 0
    assert read_points_file(bad, strict=False) == [
        RawPoint(1, 2),
        RawPoint(8, 9),
    ]
    with pytest.raises(InputParseError) as info:
        read_points_file(bad)
    assert info.value.line_number == 2


def test_invalid_parameters_exit_with_error(tmp_path):
    points = tmp_path / "points.txt"
    points.write_text("0 0\n1 1\n")
    out = tmp_path / "index.skyc"
    assert main(
        ["build", str(points), "--output", str(out), "--delta", "1"]
    ) == 2
    assert main(["count", str(tmp_path / "missing"), str(points)]) == 2


def test_build_requires_output(tmp_path):
    points = tmp_path / "points.txt"
    points.write_text("0 0\n")
    with pytest.raises(SystemExit):
        main(["build", str(points)])


def test_reduce_butterfly_files(tmp_path):
    out = tmp_path / "bf"
    assert main(
        [
            "reduce-butterfly",
            "--depth",
            "2",
            "--drop-prob",
            "0.4",
            "--seed",
            "3",
            "--out-dir",
            str(out),
        ]
    ) == 0
    points = read_points_file(out / "points.txt")
    rects = read_queries_file(out / "queries.txt")
    text = (out / "answers.txt").read_text()
    answers = [line.split() for line in text.splitlines()]
    assert len(rects) == len(answers) == 16
    for rect, (_, _, truth) in zip(rects, answers):
        found = len(oracle_skyline(points, rect))
        assert (found == 2) == (truth == "1")


def test_bench_growth_json(tmp_path):
    out = tmp_path / "bench.json"
    assert main(
        [
            "bench",
            "--growth",
            "64",
            "128",
            "--queries",
            "20",
            "--json",
            "--output",
            str(out),
        ]
    ) == 0
    rows = orjson.loads(out.read_text())
    assert [r["n"] for r in rows] == [64, 128]
    assert all(r["max_visits"] <= r["visit_bound"] for r in rows)


@pytest.mark.parametrize("shape", ["--chain", "--antichain"])
def test_bench_shaped_workloads(tmp_path, shape):
    out = tmp_path / "bench.json"
    argv = ["bench", "--growth", "64", shape, "--reports"]
    argv += ["--queries", "30", "--json", "--output", str(out)]
    assert main(argv) == 0
    (row,) = orjson.loads(out.read_text())
    assert row["max_visits"] <= row["visit_bound"]
    if shape == "--chain":
        assert row["mean_output"] <= 1.0


def test_bench_rejects_two_shapes():
    with pytest.raises(SystemExit):
        main(["bench", "--growth", "8", "--chain", "--antichain"])


def test_verify_workload_collects_mismatches():
    points = [RawPoint(i, (7 * i) % 11) for i in range(11)]
    index = SkylineIndex.build(points)
    rects = [QueryRect(0, 10, 0, 10), QueryRect(2, 5, 1, 9)]
    assert verify_workload(index, points, rects, check_reports=True).passed
