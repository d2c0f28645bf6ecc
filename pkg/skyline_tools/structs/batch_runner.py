from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Any, Callable, Dict, List, Sequence

from loguru import logger

from skyline_tools.utils.formatted_string import (
    format_object_to_string,
)


def _entry(position: int, query: Any, status: str, result: Any):
    return {
        "position": position,
        "query": query,
        "status": status,
        "result": result,
    }


def run_batch(
    queries: Sequence[Any],
    fn: Callable[[Any], Any],
    workers: int = 1,
) -> List[Dict[str, Any]]:
    """
    Runs fn over a batch of queries, in parallel or sequentially.

    The index is immutable after build, so queries may share it across
    threads.

    Args:
        queries (Sequence[Any]): Query arguments, one per call.
        fn (Callable[[Any], Any]): The per-query function.
        workers (int): Thread count; 1 runs sequentially.

    Returns:
        List[Dict[str, Any]]: One entry per query in input order, each
        with "position", "query", "status" ("success" or "error") and
        "result" (the return value or the error message).
    """
    logger.info(
        f"Running {len(queries)} queries"
        f" {'on ' + str(workers) + ' threads' if workers > 1 else 'sequentially'}"
    )
    results: List[Dict[str, Any]] = []

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            future_to_position = {
                executor.submit(fn, query): position
                for position, query in enumerate(queries)
            }
            for future in as_completed(future_to_position):
                position = future_to_position[future]
                query = queries[position]
                try:
                    results.append(
                        _entry(
                            position, query, "success", future.result()
                        )
                    )
                except Exception as e:
                    logger.error(f"Query {position} ({query}) failed: {e}")
                    results.append(_entry(position, query, "error", str(e)))
        results.sort(key=lambda entry: entry["position"])
    else:
        for position, query in enumerate(queries):
            try:
                results.append(
                    _entry(position, query, "success", fn(query))
                )
            except Exception as e:
                logger.error(f"Query {position} ({query}) failed: {e}")
                results.append(_entry(position, query, "error", str(e)))

    failed = sum(1 for entry in results if entry["status"] == "error")
    if failed:
        logger.warning(f"{failed} of {len(results)} queries failed")
    return results


def summarize_batch(results: List[Dict[str, Any]]) -> str:
    """Readable digest of a run_batch result list."""
    errors = [
        {"position": e["position"], "error": e["result"]}
        for e in results
        if e["status"] == "error"
    ]
    return format_object_to_string(
        {
            "queries": len(results),
            "succeeded": len(results) - len(errors),
            "failed": len(errors),
            "errors": errors,
        }
    )


# # Example usage
# if __name__ == "__main__":
#     from skyline_tools import SkylineIndex
#
#     index = SkylineIndex.build([(1, 5), (2, 4), (3, 3)])
#     rects = [(0, 3, 0, 5), (2, 3, 0, 5)]
#     results = run_batch(
#         rects, lambda r: index.count(*r), workers=4
#     )
#     print(summarize_batch(results))
