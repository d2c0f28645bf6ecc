from skyline_tools.structs.batch_runner import (
    run_batch,
    summarize_batch,
)
from skyline_tools.structs.block_signature import (
    BlockEvaluator,
    BlockSignature,
    block_below,
    block_rightmost,
    block_skycount,
    block_topmost,
)
from skyline_tools.structs.reporting import (
    BallInheritance,
    ReportOutput,
    build_ball_inheritance,
    report,
    resolve,
)
from skyline_tools.structs.skyline_query import (
    MultislabQuery,
    QueryStats,
    count,
    decompose,
)
from skyline_tools.structs.skyline_tree import (
    SkylineTree,
    TreeNode,
    build,
)
from skyline_tools.structs.space_report import (
    SpaceReport,
    build_space_report,
)

__all__ = [
    "run_batch",
    "summarize_batch",
    "BlockEvaluator",
    "BlockSignature",
    "block_below",
    "block_rightmost",
    "block_skycount",
    "block_topmost",
    "BallInheritance",
    "ReportOutput",
    "build_ball_inheritance",
    "report",
    "resolve",
    "MultislabQuery",
    "QueryStats",
    "count",
    "decompose",
    "SkylineTree",
    "TreeNode",
    "build",
    "SpaceReport",
    "build_space_report",
]
