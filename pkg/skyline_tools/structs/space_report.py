import math
from typing import Dict, Optional

import orjson
from pydantic import BaseModel, Field

from skyline_tools.structs.reporting import BallInheritance
from skyline_tools.structs.skyline_tree import SkylineTree
from skyline_tools.utils.formatted_string import (
    format_bits,
    format_object_to_string,
)


class SpaceReport(BaseModel):
    """Bit totals of a built index, by structure kind and tree level."""

    n: int = Field(..., description="Number of points")
    delta: int = Field(..., description="Tree degree")
    ball_b: Optional[int] = Field(
        default=None, description="Ball-inheritance fan parameter"
    )
    height: int = Field(default=0)
    structures: Dict[str, int] = Field(default_factory=dict)
    levels: Dict[int, int] = Field(
        default_factory=dict,
        description="Tree-structure bits per depth, root = 0",
    )
    total_bits: int = Field(default=0)
    ratio: float = Field(
        default=0.0, description="total_bits / (n * lg n)"
    )
    level_constant: float = Field(
        default=0.0,
        description="max per-level bits / (n * lg delta)",
    )

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "delta": self.delta,
            "ball_b": self.ball_b,
            "height": self.height,
            "total_bits": self.total_bits,
            "ratio": self.ratio,
            "level_constant": self.level_constant,
            "structures": dict(self.structures),
            "levels": {
                str(depth): bits
                for depth, bits in sorted(self.levels.items())
            },
        }

    def to_json(self) -> bytes:
        return orjson.dumps(
            self.as_dict(),
            option=orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2,
        )

    def to_text(self) -> str:
        doc = self.as_dict()
        doc["total"] = format_bits(self.total_bits)
        return format_object_to_string(doc)


def build_space_report(
    tree: SkylineTree, bi: Optional[BallInheritance] = None
) -> SpaceReport:
    """
    Sums size_bits over the nodes of a tree and its resolver.

    Per-level totals cover the tree structures only; the
    ball-inheritance arrays appear as their own structure kind.
    """
    structures = tree.size_breakdown()
    structures["ball_inheritance"] = 0 if bi is None else bi.size_bits()
    levels: Dict[int, int] = {}
    for node in tree.nodes:
        levels[node.depth] = levels.get(node.depth, 0) + node.size_bits()
    total = sum(structures.values())
    n = tree.n
    ratio = total / (n * math.log2(n)) if n > 1 else 0.0
    level_constant = 0.0
    if n > 0 and levels:
        level_constant = max(levels.values()) / (
            n * math.log2(tree.delta)
        )
    return SpaceReport(
        n=n,
        delta=tree.delta,
        ball_b=None if bi is None else bi.b,
        height=tree.height,
        structures=structures,
        levels=levels,
        total_bits=total,
        ratio=ratio,
        level_constant=level_constant,
    )
