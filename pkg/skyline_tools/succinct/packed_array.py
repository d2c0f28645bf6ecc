from typing import Iterable, Optional, Sequence, Union

import numpy as np
from bitarray import bitarray
from bitarray.util import ba2int

from skyline_tools.errors import (
    ContainerFormatError,
    ParameterError,
    RangeQueryError,
)


def bits_for(max_value: int) -> int:
    """Number of bits needed to store values in [0, max_value]."""
    if max_value <= 0:
        return 0
    return int(max_value).bit_length()


def pack_values(
    values: Union[np.ndarray, Sequence[int]], width: int
) -> bitarray:
    """Packs non-negative integers MSB-first into a bitarray."""
    arr = np.asarray(values, dtype=np.uint64)
    bits = bitarray(endian="big")
    if width == 0 or arr.size == 0:
        return bits
    if width > 64:
        raise ParameterError(f"width {width} exceeds 64 bits")
    shifts = np.arange(width - 1, -1, -1, dtype=np.uint64)
    matrix = ((arr[:, None] >> shifts) & np.uint64(1)).astype(
        np.uint8
    )
    bits.frombytes(np.packbits(matrix.ravel()).tobytes())
    del bits[arr.size * width :]
    return bits


class PackedArray:
    """
    Immutable array of fixed-width unsigned integers stored in one
    bitarray.

    Args:
        bits (bitarray): Concatenated MSB-first fields.
        width (int): Bits per entry; 0 means every entry is zero.
        length (int): Number of entries.
    """

    def __init__(self, bits: bitarray, width: int, length: int):
        self.bits = bits
        self.width = width
        self.length = length

    @classmethod
    def from_values(
        cls,
        values: Union[np.ndarray, Iterable[int]],
        width: Optional[int] = None,
    ) -> "PackedArray":
        if not isinstance(values, np.ndarray):
            values = list(values)
        arr = np.asarray(values, dtype=np.int64)
        if arr.size and int(arr.min()) < 0:
            raise ParameterError("packed values must be >= 0")
        top = int(arr.max()) if arr.size else 0
        if width is None:
            width = bits_for(top)
        elif top >> width:
            raise ParameterError(
                f"value {top} does not fit in {width} bits"
            )
        return cls(pack_values(arr, width), width, int(arr.size))

    def __len__(self) -> int:
        return self.length

    def get(self, i: int) -> int:
        """Entry i, 0-based."""
        if not 0 <= i < self.length:
            raise RangeQueryError(
                f"packed index {i} outside [0, {self.length})"
            )
        if self.width == 0:
            return 0
        start = i * self.width
        return ba2int(self.bits[start : start + self.width])

    def get_span(self, start: int, stop: int) -> int:
        """Entries [start, stop) concatenated into one integer."""
        if self.width == 0 or stop <= start:
            return 0
        return ba2int(
            self.bits[start * self.width : stop * self.width]
        )

    def to_numpy(self) -> np.ndarray:
        return np.array(
            [self.get(i) for i in range(self.length)], dtype=np.int64
        )

    def size_bits(self) -> int:
        return self.width * self.length + 64

    def write_to(self, writer) -> None:
        writer.u32(self.width)
        writer.u64(self.length)
        writer.bits(self.bits)

    @classmethod
    def read_from(cls, reader) -> "PackedArray":
        width = reader.u32()
        length = reader.u64()
        bits = reader.bits()
        if len(bits) != width * length:
            raise ContainerFormatError(
                "packed array payload length mismatch"
            )
        return cls(bits, width, length)
