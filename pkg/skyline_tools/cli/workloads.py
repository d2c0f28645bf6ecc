"""
Seeded workloads, text I/O for point and query files, and the
index-versus-oracle verification routine.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger

from skyline_tools.errors import InputParseError
from skyline_tools.geometry.point_model import (
    QueryRect,
    RawPoint,
    oracle_skyline,
)
from skyline_tools.reduction.butterfly import (
    ButterflyGraph,
    ReductionInstance,
    bfs_reachable,
    build_points,
    random_subgraph,
)

MAX_MISMATCHES = 10


def random_permutation_points(n: int, seed: int = 0) -> List[RawPoint]:
    """Rank-space permutation points (i, perm[i])."""
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    return [RawPoint(i, int(y)) for i, y in enumerate(perm)]


def chain_points(n: int) -> List[RawPoint]:
    return [RawPoint(i, i) for i in range(n)]


def antichain_points(n: int) -> List[RawPoint]:
    return [RawPoint(i, n - 1 - i) for i in range(n)]


def random_rects(
    points: Sequence[RawPoint], q: int, seed: int = 0
) -> List[QueryRect]:
    """
    q random closed rectangles over the points' bounding box, padded by
    one unit so that empty margins are exercised too.
    """
    rng = np.random.default_rng(seed)
    if points:
        xs = [p.x for p in points]
        ys = [p.y for p in points]
        lo_x, hi_x = min(xs) - 1, max(xs) + 1
        lo_y, hi_y = min(ys) - 1, max(ys) + 1
    else:
        lo_x = lo_y = 0
        hi_x = hi_y = 1
    cx = rng.integers(lo_x, hi_x + 1, size=(q, 2))
    cy = rng.integers(lo_y, hi_y + 1, size=(q, 2))
    return [
        QueryRect(
            int(min(a)), int(max(a)), int(min(b)), int(max(b))
        )
        for a, b in zip(cx, cy)
    ]


@dataclass
class ButterflyWorkload:
    instance: ReductionInstance
    pairs: List[Tuple[int, int]]
    rects: List[QueryRect]
    truths: List[bool]


def butterfly_workload(
    b: int, d: int, p: float = 0.7, seed: int = 0
) -> ButterflyWorkload:
    """P(G) of a random subgraph with every source-sink corner query."""
    graph = ButterflyGraph(b, d)
    g = random_subgraph(graph, p, seed)
    inst = build_points(g)
    pairs = [
        (s, t) for s in range(graph.width) for t in range(graph.width)
    ]
    return ButterflyWorkload(
        inst,
        pairs,
        [inst.query_rect(s, t) for s, t in pairs],
        [bfs_reachable(g, s, t) for s, t in pairs],
    )


def _parse_ints(
    line: str, line_number: int, arity: int
) -> Optional[List[int]]:
    fields = line.split()
    if not fields or fields[0].startswith("#"):
        return None
    if len(fields) != arity:
        raise InputParseError(
            line_number, line, f"expected {arity} integers"
        )
    try:
        return [int(v) for v in fields]
    except ValueError:
        raise InputParseError(
            line_number, line, "not an integer"
        ) from None


def _read_rows(
    path: Union[str, Path], arity: int, strict: bool
) -> List[List[int]]:
    rows = []
    text = Path(path).read_text()
    for number, line in enumerate(text.splitlines(), start=1):
        try:
            row = _parse_ints(line, number, arity)
        except InputParseError as e:
            if strict:
                logger.error(f"{path}: {e}")
                raise
            logger.warning(f"{path}: skipping {e}")
            continue
        if row is not None:
            rows.append(row)
    return rows


def read_points_file(
    path: Union[str, Path], strict: bool = True
) -> List[RawPoint]:
    """Lines of "x y"; blank lines and # comments are ignored."""
    return [RawPoint(x, y) for x, y in _read_rows(path, 2, strict)]


def read_queries_file(
    path: Union[str, Path], strict: bool = True
) -> List[QueryRect]:
    """Lines of "x1 x2 y1 y2" in raw coordinates."""
    return [
        QueryRect(x1, x2, y1, y2)
        for x1, x2, y1, y2 in _read_rows(path, 4, strict)
    ]


def write_points_file(
    path: Union[str, Path], points: Sequence[RawPoint]
) -> None:
    Path(path).write_text("".join(f"{p.x} {p.y}\n" for p in points))


def write_queries_file(
    path: Union[str, Path], rects: Sequence[QueryRect]
) -> None:
    Path(path).write_text(
        "".join(f"{r.x1} {r.x2} {r.y1} {r.y2}\n" for r in rects)
    )


def format_point_list(points: Sequence[RawPoint]) -> str:
    return ";".join(f"{p.x} {p.y}" for p in points)


@dataclass
class VerifyResult:
    passed: bool = True
    compared: int = 0
    mismatches: List[Dict[str, Any]] = field(default_factory=list)
    failures: int = 0

    def record(self, position: int, rect: QueryRect, **answers):
        self.passed = False
        self.failures += 1
        if len(self.mismatches) < MAX_MISMATCHES:
            self.mismatches.append(
                {"query": position, "rect": rect.as_tuple(), **answers}
            )


def verify_workload(
    index,
    raw_points: Sequence[RawPoint],
    rects: Sequence[QueryRect],
    check_reports: bool = False,
) -> VerifyResult:
    """
    Runs the index and the brute-force oracle side by side.

    Args:
        index (SkylineIndex): The index under test.
        raw_points (Sequence[RawPoint]): The indexed points.
        rects (Sequence[QueryRect]): Raw query rectangles.
        check_reports (bool): Also compare ordered reports, and their
            length against the count.

    Returns:
        VerifyResult: Pass flag, compared count and the first mismatches.
    """
    points = [
        p if isinstance(p, RawPoint) else RawPoint(*p)
        for p in raw_points
    ]
    result = VerifyResult()
    for position, rect in enumerate(rects):
        expected = oracle_skyline(points, rect)
        got = index.count(rect)
        result.compared += 1
        if got != len(expected):
            result.record(
                position, rect, index=got, oracle=len(expected)
            )
            continue
        if check_reports:
            reported = index.report(rect)
            if reported != expected or len(reported) != got:
                result.record(
                    position,
                    rect,
                    index=format_point_list(reported),
                    oracle=format_point_list(expected),
                )
    if result.passed:
        logger.success(f"Verified {result.compared} queries")
    else:
        logger.error(
            f"{result.failures} of {result.compared} queries disagree"
            " with the oracle"
        )
    return result
