from skyline_tools.storage.codec import ByteReader, ByteWriter
from skyline_tools.storage.container import (
    FORMAT_VERSION,
    MAGIC,
    ContainerContents,
    decode_container,
    encode_container,
    load_container,
    save_container,
)

__all__ = [
    "ByteReader",
    "ByteWriter",
    "FORMAT_VERSION",
    "MAGIC",
    "ContainerContents",
    "decode_container",
    "encode_container",
    "load_container",
    "save_container",
]
