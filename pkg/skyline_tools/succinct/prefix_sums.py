from typing import Sequence, Union

import numpy as np

from skyline_tools.errors import ParameterError, RangeQueryError
from skyline_tools.succinct.elias_fano import WORD_BITS, EliasFano


class MonotoneSequence:
    """Prefix sums of X[1..s] stored as an Elias-Fano coded sequence."""

    def __init__(self, length: int, total: int, sums: EliasFano):
        self.length = length
        self.total = total
        self._sums = sums

    def __len__(self) -> int:
        return self.length

    def prefix(self, i: int) -> int:
        """X[1] + ... + X[i]; prefix(0) = 0."""
        if not 0 <= i <= self.length:
            raise RangeQueryError(
                f"prefix index {i} outside [0, {self.length}]"
            )
        if i == 0:
            return 0
        return self._sums.access(i - 1)

    def lookup(self, i: int) -> int:
        if not 1 <= i <= self.length:
            raise RangeQueryError(
                f"lookup index {i} outside [1, {self.length}]"
            )
        return self.prefix(i) - self.prefix(i - 1)

    def range_sum(self, i: int, j: int) -> int:
        """X[i] + ... + X[j]; zero when j < i."""
        if j < i:
            return 0
        return self.prefix(j) - self.prefix(i - 1)

    def size_bits(self) -> int:
        """At most 4.5 s lg(2 + t/s) bits plus seven words."""
        return self._sums.size_bits() + 2 * WORD_BITS

    def write_to(self, writer) -> None:
        writer.u64(self.length)
        writer.u64(self.total)
        self._sums.write_to(writer)

    @classmethod
    def read_from(cls, reader) -> "MonotoneSequence":
        length = reader.u64()
        total = reader.u64()
        return cls(length, total, EliasFano.read_from(reader))


def build_prefix_sums(
    values: Union[np.ndarray, Sequence[int]],
) -> MonotoneSequence:
    """
    Builds a MonotoneSequence over non-negative integers.

    Args:
        values: X[1..s].

    Returns:
        MonotoneSequence: prefix(i) and lookup(i) in O(1) selects.

    Raises:
        ParameterError: If a value is negative.
    """
    arr = np.asarray(values, dtype=np.int64)
    if arr.size and int(arr.min()) < 0:
        raise ParameterError("prefix-sum values must be >= 0")
    sums = np.cumsum(arr) if arr.size else arr
    total = int(sums[-1]) if arr.size else 0
    return MonotoneSequence(
        int(arr.size), total, EliasFano.build(sums, total + 1)
    )
