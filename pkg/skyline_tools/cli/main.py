"""
skyline-tools command line: build, count, report, verify, bench, space
and reduce-butterfly.
"""

import argparse
import sys
import time
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
import orjson
from loguru import logger
from rich.console import Console
from rich.table import Table

from skyline_tools.config import SkylineConfig, load_config
from skyline_tools.errors import SkylineToolsError
from skyline_tools.cli.workloads import (
    MAX_MISMATCHES,
    antichain_points,
    butterfly_workload,
    chain_points,
    format_point_list,
    random_permutation_points,
    random_rects,
    read_points_file,
    read_queries_file,
    verify_workload,
    write_points_file,
    write_queries_file,
)
from skyline_tools.index import SkylineIndex
from skyline_tools.reduction.butterfly import reach_via_skyline
from skyline_tools.structs.batch_runner import run_batch
from skyline_tools.structs.skyline_query import QueryStats

console = Console(stderr=True)

EXIT_FAIL = 1
EXIT_ERROR = 2


def _configure_logging(level: str) -> None:
    logger.remove()
    logger.add(sys.stderr, level=level.upper())


def _config(args: argparse.Namespace) -> SkylineConfig:
    return load_config(
        delta=getattr(args, "delta", None),
        ball_b=getattr(args, "ball_b", None),
        epsilon=getattr(args, "epsilon", None),
        memo_cache=getattr(args, "memo_cache", None),
        strict=getattr(args, "strict", None),
        seed=getattr(args, "seed", None),
        collect_stats=getattr(args, "stats", None) or None,
        workers=getattr(args, "workers", None),
        log_level=getattr(args, "log_level", None),
    )


def _emit(lines: Sequence[str], output: Optional[Path]) -> None:
    text = "".join(f"{line}\n" for line in lines)
    if output is None:
        sys.stdout.write(text)
    else:
        output.write_text(text)


def _key_value_table(title: str, rows: Dict[str, object]) -> Table:
    table = Table(title=title)
    table.add_column("field")
    table.add_column("value", justify="right")
    for key, value in rows.items():
        table.add_row(key, str(value))
    return table


def _stats_table(stats: List[QueryStats]) -> Table:
    totals: Dict[str, int] = {}
    for s in stats:
        for key, value in s.as_dict().items():
            totals[key] = totals.get(key, 0) + value
    totals["queries"] = len(stats)
    return _key_value_table("query statistics", totals)


def cmd_build(args: argparse.Namespace) -> int:
    config = _config(args)
    points = read_points_file(args.points, strict=config.strict)
    start = time.perf_counter()
    index = SkylineIndex.build(points, config)
    elapsed = time.perf_counter() - start
    size = index.save(args.output)
    space = index.space_report()
    console.print(
        _key_value_table(
            "build",
            {
                "points": index.n,
                "delta": index.tree.delta,
                "ball B": index.ball.b,
                "height": index.tree.height,
                "build seconds": f"{elapsed:.3f}",
                "container bytes": size,
                "structure bits": space.total_bits,
                "bits / (n lg n)": f"{space.ratio:.3f}",
            },
        )
    )
    return 0


def _answer_queries(
    args: argparse.Namespace,
    answer: Callable[
        [SkylineIndex, object, Optional[QueryStats]], str
    ],
) -> int:
    config = _config(args)
    index = SkylineIndex.load(args.index, config)
    rects = read_queries_file(args.queries, strict=config.strict)
    stats: List[QueryStats] = []

    def run(rect) -> str:
        s = None
        if config.collect_stats:
            s = QueryStats()
            stats.append(s)
        return answer(index, rect, s)

    results = run_batch(rects, run, workers=config.workers)
    failed = [r for r in results if r["status"] == "error"]
    _emit(
        [
            r["result"] if r["status"] == "success" else "error"
            for r in results
        ],
        args.output,
    )
    if args.stats:
        console.print(_stats_table(stats))
    return EXIT_ERROR if failed else 0


def cmd_count(args: argparse.Namespace) -> int:
    return _answer_queries(
        args, lambda index, rect, s: str(index.count(rect, s))
    )


def cmd_report(args: argparse.Namespace) -> int:
    return _answer_queries(
        args,
        lambda index, rect, s: format_point_list(index.report(rect, s)),
    )


def _print_mismatches(mismatches: List[dict]) -> None:
    table = Table(title="first mismatches")
    for column in ("query", "rect", "index", "oracle"):
        table.add_column(column)
    for m in mismatches:
        table.add_row(
            str(m["query"]),
            " ".join(str(v) for v in m["rect"]),
            str(m["index"]),
            str(m["oracle"]),
        )
    console.print(table)


def _verify_butterfly(args: argparse.Namespace, config) -> int:
    workload = butterfly_workload(
        args.degree, args.depth, 1.0 - args.drop_prob, config.seed
    )
    index = SkylineIndex.build(workload.instance.points, config)
    mismatches = []
    for (s, t), truth in zip(workload.pairs, workload.truths):
        got = reach_via_skyline(workload.instance, index, s, t)
        if got != truth and len(mismatches) < MAX_MISMATCHES:
            mismatches.append(
                {
                    "query": f"s={s} t={t}",
                    "rect": workload.instance.query_rect(s, t).as_tuple(),
                    "index": got,
                    "oracle": truth,
                }
            )
    if mismatches:
        console.print("[bold red]FAIL[/bold red]")
        _print_mismatches(mismatches)
        return EXIT_FAIL
    console.print(
        f"[bold green]PASS[/bold green] {len(workload.pairs)}"
        " source-sink pairs"
    )
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    config = _config(args)
    if args.butterfly:
        return _verify_butterfly(args, config)
    if args.random is not None:
        n, q = args.random
        points = random_permutation_points(n, config.seed)
        rects = random_rects(points, q, config.seed + 1)
    elif args.points and args.queries:
        points = read_points_file(args.points, strict=config.strict)
        rects = read_queries_file(args.queries, strict=config.strict)
    else:
        raise SkylineToolsError(
            "verify needs POINTS QUERIES, --random N Q or --butterfly"
        )
    index = SkylineIndex.build(points, config)
    result = verify_workload(
        index, points, rects, check_reports=args.reports
    )
    if not result.passed:
        console.print(
            f"[bold red]FAIL[/bold red] {result.failures} of"
            f" {result.compared} queries"
        )
        _print_mismatches(result.mismatches)
        return EXIT_FAIL
    console.print(
        f"[bold green]PASS[/bold green] {result.compared} queries"
    )
    return 0


def _bench_one(
    index: SkylineIndex, rects, reports: bool
) -> Dict[str, float]:
    latencies, visits, sizes = [], [], []
    for rect in rects:
        s = QueryStats()
        start = time.perf_counter()
        if reports:
            sizes.append(len(index.report(rect, s)))
        else:
            index.count(rect, s)
        latencies.append(time.perf_counter() - start)
        visits.append(s.visit_count)
    lat = np.asarray(latencies) * 1e6
    bound = 2 * index.tree.height + 1
    result = {
        "n": index.n,
        "delta": index.tree.delta,
        "height": index.tree.height,
        "queries": len(rects),
        "p50_us": float(np.percentile(lat, 50)) if lat.size else 0.0,
        "p90_us": float(np.percentile(lat, 90)) if lat.size else 0.0,
        "p99_us": float(np.percentile(lat, 99)) if lat.size else 0.0,
        "mean_visits": float(np.mean(visits)) if visits else 0.0,
        "max_visits": int(max(visits, default=0)),
        "visit_bound": bound,
    }
    if reports:
        result["mean_output"] = float(np.mean(sizes)) if sizes else 0.0
    return result


def cmd_bench(args: argparse.Namespace) -> int:
    config = _config(args)
    rows = []
    if args.growth:
        for n in args.growth:
            if args.chain:
                pts = chain_points(n)
            elif args.antichain:
                pts = antichain_points(n)
            else:
                pts = random_permutation_points(n, config.seed)
            index = SkylineIndex.build(pts, config)
            rects = random_rects(pts, args.queries, config.seed + 1)
            rows.append(_bench_one(index, rects, args.reports))
    else:
        if args.index is None:
            raise SkylineToolsError("bench needs INDEX or --growth")
        index = SkylineIndex.load(args.index, config)
        pts = index.points.raw_points()
        rects = random_rects(pts, args.queries, config.seed + 1)
        rows.append(_bench_one(index, rects, args.reports))
    if args.json:
        _emit(
            [orjson.dumps(rows, option=orjson.OPT_INDENT_2).decode()],
            args.output,
        )
    else:
        table = Table(title="bench")
        for column in rows[0]:
            table.add_column(column, justify="right")
        for row in rows:
            table.add_row(
                *(
                    f"{v:.2f}" if isinstance(v, float) else str(v)
                    for v in row.values()
                )
            )
        console.print(table)
    over = [r for r in rows if r["max_visits"] > r["visit_bound"]]
    if over:
        logger.warning(f"Visit bound exceeded on {len(over)} runs")
    return 0


def cmd_space(args: argparse.Namespace) -> int:
    config = _config(args)
    report = SkylineIndex.load(args.index, config).space_report()
    if args.json:
        _emit([report.to_json().decode()], args.output)
    else:
        _emit([report.to_text()], args.output)
    return 0


def cmd_reduce_butterfly(args: argparse.Namespace) -> int:
    config = _config(args)
    workload = butterfly_workload(
        args.degree, args.depth, 1.0 - args.drop_prob, config.seed
    )
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_points_file(out / "points.txt", workload.instance.points)
    write_queries_file(out / "queries.txt", workload.rects)
    (out / "answers.txt").write_text(
        "".join(
            f"{s} {t} {int(truth)}\n"
            for (s, t), truth in zip(workload.pairs, workload.truths)
        )
    )
    logger.success(
        f"Wrote {len(workload.instance.points)} points and"
        f" {len(workload.rects)} queries to {out}"
    )
    return 0


def _add_build_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--delta", type=int, help="tree degree (>= 2)")
    p.add_argument(
        "--ball-b",
        dest="ball_b",
        type=int,
        help="ball-inheritance B; 0 selects ceil(lg^eps n)",
    )
    p.add_argument("--epsilon", type=float)
    p.add_argument("--memo-cache", dest="memo_cache", type=int)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--strict",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="abort on malformed input lines (default on)",
    )
    p.add_argument("--seed", type=int)
    p.add_argument("--output", type=Path)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skyline-tools",
        description="Succinct orthogonal skyline counting index",
    )
    parser.add_argument("--log-level", dest="log_level", default=None)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build an index file")
    p.add_argument("points", type=Path)
    _add_build_flags(p)
    _add_common(p)
    p.set_defaults(func=cmd_build)

    for name, func in (("count", cmd_count), ("report", cmd_report)):
        p = sub.add_parser(name, help=f"{name} skylines of queries")
        p.add_argument("index", type=Path)
        p.add_argument("queries", type=Path)
        p.add_argument("--workers", type=int)
        p.add_argument("--stats", action="store_true")
        p.add_argument("--memo-cache", dest="memo_cache", type=int)
        _add_common(p)
        p.set_defaults(func=func)

    p = sub.add_parser("verify", help="compare the index to the oracle")
    p.add_argument("points", type=Path, nargs="?")
    p.add_argument("queries", type=Path, nargs="?")
    p.add_argument("--random", type=int, nargs=2, metavar=("N", "Q"))
    p.add_argument("--reports", action="store_true")
    p.add_argument("--butterfly", action="store_true")
    p.add_argument("--degree", type=int, default=2)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--drop-prob", dest="drop_prob", type=float, default=0.3)
    _add_build_flags(p)
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="latency and node-visit statistics")
    p.add_argument("index", type=Path, nargs="?")
    p.add_argument("--queries", type=int, default=1000)
    p.add_argument("--growth", type=int, nargs="+", metavar="N")
    shape = p.add_mutually_exclusive_group()
    shape.add_argument("--chain", action="store_true")
    shape.add_argument("--antichain", action="store_true")
    p.add_argument("--reports", action="store_true")
    p.add_argument("--json", action="store_true")
    _add_build_flags(p)
    _add_common(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("space", help="space accounting")
    p.add_argument("index", type=Path)
    p.add_argument("--json", action="store_true")
    _add_common(p)
    p.set_defaults(func=cmd_space)

    p = sub.add_parser(
        "reduce-butterfly", help="emit a butterfly reduction workload"
    )
    p.add_argument("--degree", type=int, default=2)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--drop-prob", dest="drop_prob", type=float, default=0.3)
    p.add_argument("--out-dir", dest="out_dir", type=Path, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_reduce_butterfly)
    return parser


@logger.catch(reraise=True)
def _dispatch(args: argparse.Namespace) -> int:
    try:
        return args.func(args)
    except (SkylineToolsError, OSError) as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_ERROR


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config_level = args.log_level or load_config().log_level
    _configure_logging(config_level)
    if args.command == "build" and args.output is None:
        parser.error("build needs --output INDEX")
    return _dispatch(args)


if __name__ == "__main__":
    sys.exit(main())
