"""
Index container: magic, version, a JSON parameter block, then one
length-prefixed binary section per component and a SHA-256 trailer
over everything before it.
"""

import hashlib
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np
import orjson
from loguru import logger

from skyline_tools.errors import ContainerFormatError
from skyline_tools.geometry.point_model import PointSet
from skyline_tools.storage.codec import ByteReader, ByteWriter
from skyline_tools.structs.reporting import BallInheritance
from skyline_tools.structs.skyline_tree import SkylineTree

MAGIC = b"SKYC"
FORMAT_VERSION = 1
DIGEST_BYTES = 32


@dataclass
class ContainerContents:
    params: Dict[str, Any]
    points: PointSet
    tree: SkylineTree
    ball: Optional[BallInheritance]


def _points_section(ps: PointSet) -> bytes:
    writer = ByteWriter()
    writer.int_array(ps.raw_x)
    writer.int_array(ps.raw_y)
    writer.int_array(ps.y_of_x)
    return writer.getvalue()


def _read_points(data: bytes) -> PointSet:
    reader = ByteReader(data)
    raw_x = reader.int_array()
    raw_y = reader.int_array()
    y_of_x = reader.int_array()
    if not raw_x.size == raw_y.size == y_of_x.size:
        raise ContainerFormatError("point section arrays differ in size")
    y_keys = np.empty_like(raw_y)
    y_keys[y_of_x] = raw_y
    return PointSet(
        y_of_x=y_of_x,
        raw_x=raw_x,
        raw_y=raw_y,
        x_keys=raw_x.copy(),
        y_keys=y_keys,
    )


def encode_container(
    params: Dict[str, Any],
    points: PointSet,
    tree: SkylineTree,
    ball: Optional[BallInheritance] = None,
) -> bytes:
    """Serializes an index; equal inputs give identical bytes."""
    writer = ByteWriter()
    writer.u16(FORMAT_VERSION)
    writer.blob(orjson.dumps(params, option=orjson.OPT_SORT_KEYS))
    writer.blob(_points_section(points))
    tree_writer = ByteWriter()
    tree.write_to(tree_writer)
    writer.blob(tree_writer.getvalue())
    writer.u8(0 if ball is None else 1)
    if ball is not None:
        ball_writer = ByteWriter()
        ball.write_to(ball_writer)
        writer.blob(ball_writer.getvalue())
    body = MAGIC + writer.getvalue()
    return body + hashlib.sha256(body).digest()


def decode_container(
    data: bytes, memo_capacity: int = 0
) -> ContainerContents:
    """
    Parses container bytes.

    Raises:
        ContainerFormatError: On bad magic, unsupported version,
            checksum mismatch, truncation or trailing bytes.
    """
    if len(data) < len(MAGIC) + DIGEST_BYTES or not data.startswith(
        MAGIC
    ):
        raise ContainerFormatError("not a skyline index container")
    body, digest = data[:-DIGEST_BYTES], data[-DIGEST_BYTES:]
    if hashlib.sha256(body).digest() != digest:
        raise ContainerFormatError("container checksum mismatch")
    reader = ByteReader(body[len(MAGIC) :])
    version = reader.u16()
    if version != FORMAT_VERSION:
        raise ContainerFormatError(
            f"container version {version}, expected {FORMAT_VERSION}"
        )
    try:
        params = orjson.loads(reader.blob())
    except orjson.JSONDecodeError as e:
        raise ContainerFormatError(f"bad parameter block: {e}") from e
    points = _read_points(reader.blob())
    tree_reader = ByteReader(reader.blob())
    tree = SkylineTree.read_from(tree_reader, memo_capacity)
    if not tree_reader.at_end():
        raise ContainerFormatError("trailing bytes in tree section")
    ball = None
    if reader.u8():
        ball_reader = ByteReader(reader.blob())
        ball = BallInheritance.read_from(ball_reader)
        tree.resolver = ball
    if not reader.at_end():
        raise ContainerFormatError("trailing bytes after sections")
    if tree.n != points.n:
        raise ContainerFormatError(
            f"tree holds {tree.n} points, point section {points.n}"
        )
    return ContainerContents(params, points, tree, ball)


def save_container(
    path: Union[str, Path],
    params: Dict[str, Any],
    points: PointSet,
    tree: SkylineTree,
    ball: Optional[BallInheritance] = None,
) -> int:
    """Writes a container file; returns its size in bytes."""
    data = encode_container(params, points, tree, ball)
    Path(path).write_bytes(data)
    logger.info(f"Saved index container to {path} ({len(data)} bytes)")
    return len(data)


def load_container(
    path: Union[str, Path], memo_capacity: int = 0
) -> ContainerContents:
    data = Path(path).read_bytes()
    contents = decode_container(data, memo_capacity)
    logger.info(
        f"Loaded index container {path}: n={contents.tree.n},"
        f" delta={contents.tree.delta}"
    )
    return contents
