import numpy as np
from bitarray import bitarray
from bitarray.util import count_n

from skyline_tools.errors import RangeQueryError

SUPERBLOCK_BITS = 512
COUNTER_BITS = 32


class BitDirectory:
    """
    Rank/select support over a plain bitarray.

    Cumulative one-counts are sampled every SUPERBLOCK_BITS bits; the
    remainder of a rank is counted inside one superblock and selects
    binary-search the samples before scanning one superblock with
    ``count_n``.

    Positions are 0-based. ``rank1(i)`` counts ones in bits[0:i].
    ``select1(r)`` returns the position of the r-th one (r >= 1).
    """

    def __init__(self, bits: bitarray):
        self.bits = bits
        n = len(bits)
        samples = n // SUPERBLOCK_BITS + 1
        ones = np.zeros(samples, dtype=np.int64)
        running = 0
        for k in range(samples):
            ones[k] = running
            start = k * SUPERBLOCK_BITS
            stop = min(start + SUPERBLOCK_BITS, n)
            if start < stop:
                running += bits.count(1, start, stop)
        self.ones_before = ones
        self.zeros_before = (
            np.arange(samples, dtype=np.int64) * SUPERBLOCK_BITS
            - ones
        )
        self.total_ones = running
        self.total_zeros = n - running

    def __len__(self) -> int:
        return len(self.bits)

    def rank1(self, i: int) -> int:
        if not 0 <= i <= len(self.bits):
            raise RangeQueryError(
                f"rank position {i} outside [0, {len(self.bits)}]"
            )
        k = i // SUPERBLOCK_BITS
        start = k * SUPERBLOCK_BITS
        extra = self.bits.count(1, start, i) if i > start else 0
        return int(self.ones_before[k]) + extra

    def select1(self, r: int) -> int:
        if not 1 <= r <= self.total_ones:
            raise RangeQueryError(
                f"select rank {r} outside [1, {self.total_ones}]"
            )
        k = int(np.searchsorted(self.ones_before, r, side="left")) - 1
        start = k * SUPERBLOCK_BITS
        segment = self.bits[start : start + SUPERBLOCK_BITS]
        need = r - int(self.ones_before[k])
        return start + count_n(segment, need) - 1

    def select0(self, r: int) -> int:
        if not 1 <= r <= self.total_zeros:
            raise RangeQueryError(
                f"select0 rank {r} outside [1, {self.total_zeros}]"
            )
        k = (
            int(np.searchsorted(self.zeros_before, r, side="left"))
            - 1
        )
        start = k * SUPERBLOCK_BITS
        segment = ~self.bits[start : start + SUPERBLOCK_BITS]
        need = r - int(self.zeros_before[k])
        return start + count_n(segment, need) - 1

    def size_bits(self) -> int:
        """Sampled counters only, at most s/8 + 64 bits."""
        return 2 * COUNTER_BITS * len(self.ones_before)
