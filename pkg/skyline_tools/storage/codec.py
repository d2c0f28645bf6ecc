import struct

import numpy as np
from bitarray import bitarray

from skyline_tools.errors import ContainerFormatError


class ByteWriter:
    """Little-endian binary writer for index sections."""

    def __init__(self):
        self._chunks = []

    def u8(self, value: int) -> None:
        self._chunks.append(struct.pack("<B", value))

    def u16(self, value: int) -> None:
        self._chunks.append(struct.pack("<H", value))

    def u32(self, value: int) -> None:
        self._chunks.append(struct.pack("<I", value))

    def u64(self, value: int) -> None:
        self._chunks.append(struct.pack("<Q", value))

    def i64(self, value: int) -> None:
        self._chunks.append(struct.pack("<q", value))

    def blob(self, data: bytes) -> None:
        self.u64(len(data))
        self._chunks.append(bytes(data))

    def bits(self, value: bitarray) -> None:
        self.u64(len(value))
        padded = bitarray(value, endian="big")
        self._chunks.append(padded.tobytes())

    def int_array(self, values: np.ndarray) -> None:
        arr = np.asarray(values, dtype="<i8")
        self.u64(arr.size)
        self._chunks.append(arr.tobytes())

    def getvalue(self) -> bytes:
        return b"".join(self._chunks)


class ByteReader:
    """Mirror of ByteWriter; truncation raises ContainerFormatError."""

    def __init__(self, data: bytes):
        self._data = memoryview(data)
        self._pos = 0

    def _take(self, size: int) -> bytes:
        end = self._pos + size
        if end > len(self._data):
            raise ContainerFormatError(
                f"truncated section: need {size} bytes at offset"
                f" {self._pos}"
            )
        chunk = self._data[self._pos : end].tobytes()
        self._pos = end
        return chunk

    def _unpack(self, fmt: str) -> int:
        return struct.unpack(fmt, self._take(struct.calcsize(fmt)))[0]

    def u8(self) -> int:
        return self._unpack("<B")

    def u16(self) -> int:
        return self._unpack("<H")

    def u32(self) -> int:
        return self._unpack("<I")

    def u64(self) -> int:
        return self._unpack("<Q")

    def i64(self) -> int:
        return self._unpack("<q")

    def blob(self) -> bytes:
        return self._take(self.u64())

    def bits(self) -> bitarray:
        nbits = self.u64()
        value = bitarray(endian="big")
        value.frombytes(self._take((nbits + 7) // 8))
        del value[nbits:]
        return value

    def int_array(self) -> np.ndarray:
        size = self.u64()
        return np.frombuffer(self._take(8 * size), dtype="<i8").astype(
            np.int64
        )

    def at_end(self) -> bool:
        return self._pos == len(self._data)
