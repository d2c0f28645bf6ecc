from bisect import bisect_right
from typing import Sequence, Union

import numpy as np
from bitarray import bitarray

from skyline_tools.errors import (
    ContainerFormatError,
    ParameterError,
    RangeQueryError,
)
from skyline_tools.succinct.bit_directory import BitDirectory
from skyline_tools.succinct.packed_array import PackedArray

WORD_BITS = 64


class EliasFano:
    """
    Nondecreasing sequence of non-negative integers below a universe u,
    split into ``low_width`` explicit low bits per value and a unary
    coded high part.

    Value r (0-based) sets bit ``(v_r >> low_width) + r`` of the high
    part, so bucket boundaries are the zeros of that bitarray.
    """

    def __init__(
        self,
        count: int,
        universe: int,
        low_width: int,
        low: PackedArray,
        high: bitarray,
    ):
        self.count = count
        self.universe = universe
        self.low_width = low_width
        self.low = low
        self.high = high
        self.directory = BitDirectory(high)

    @staticmethod
    def choose_low_width(count: int, universe: int) -> int:
        if count == 0 or universe <= count:
            return 0
        return (universe // count).bit_length() - 1

    @classmethod
    def build(
        cls,
        values: Union[np.ndarray, Sequence[int]],
        universe: int,
    ) -> "EliasFano":
        arr = np.asarray(values, dtype=np.int64)
        count = int(arr.size)
        if count:
            if int(arr.min()) < 0 or int(arr.max()) >= universe:
                raise ParameterError(
                    f"values must lie in [0, {universe})"
                )
            if np.any(np.diff(arr) < 0):
                raise ParameterError("values must be nondecreasing")
        low_width = cls.choose_low_width(count, universe)
        mask = (1 << low_width) - 1
        low = PackedArray.from_values(arr & mask, width=low_width)
        buckets = max(universe, 1) >> low_width
        high_len = count + buckets + 1
        marks = np.zeros(high_len, dtype=np.uint8)
        if count:
            marks[(arr >> low_width) + np.arange(count)] = 1
        high = bitarray(endian="big")
        high.frombytes(np.packbits(marks).tobytes())
        del high[high_len:]
        return cls(count, universe, low_width, low, high)

    def __len__(self) -> int:
        return self.count

    def access(self, r: int) -> int:
        """Value r, 0-based."""
        if not 0 <= r < self.count:
            raise RangeQueryError(
                f"sequence index {r} outside [0, {self.count})"
            )
        pos = self.directory.select1(r + 1)
        high = pos - r
        return (high << self.low_width) | self.low.get(r)

    def _bucket_start(self, h: int) -> int:
        # number of values whose high part is < h
        if h == 0:
            return 0
        return self.directory.select0(h) - h + 1

    def count_leq(self, v: int) -> int:
        """Number of stored values <= v."""
        if v < 0 or self.count == 0:
            return 0
        if v >= self.universe - 1:
            return self.count
        h = v >> self.low_width
        start = self._bucket_start(h)
        stop = self._bucket_start(h + 1)
        if start == stop:
            return start
        target = v & ((1 << self.low_width) - 1)
        lows = [self.low.get(r) for r in range(start, stop)]
        return start + bisect_right(lows, target)

    def to_numpy(self) -> np.ndarray:
        return np.array(
            [self.access(r) for r in range(self.count)],
            dtype=np.int64,
        )

    def size_bits(self) -> int:
        """At most t max(0, lg(u/t)) + 3.5t bits plus five words."""
        return (
            self.low_width * self.count
            + len(self.high)
            + self.directory.size_bits()
            + 3 * WORD_BITS
        )

    def write_to(self, writer) -> None:
        writer.u64(self.count)
        writer.u64(self.universe)
        writer.u32(self.low_width)
        self.low.write_to(writer)
        writer.bits(self.high)

    @classmethod
    def read_from(cls, reader) -> "EliasFano":
        count = reader.u64()
        universe = reader.u64()
        low_width = reader.u32()
        low = PackedArray.read_from(reader)
        high = reader.bits()
        if len(low) != count:
            raise ContainerFormatError("elias-fano length mismatch")
        return cls(count, universe, low_width, low, high)
