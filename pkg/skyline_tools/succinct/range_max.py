"""
Range-maximum index without the value array.

The values are replaced by the push/pop trace of the stack that builds
their Cartesian tree (smallest index wins ties): a sentinel open bit,
then for every value one close bit per popped entry followed by one
open bit. The leftmost maximum of X[i..j] is the element whose open bit
follows the rightmost minimum of the excess curve over
[open(i) - 1, open(j)], so a range-minimum over the excess, whose
values are computable from rank, answers the query.

Excess minima are located with per-microblock lookup tables keyed by
the block's bit pattern, a sparse table over the microblocks of each
superblock and a sparse table over superblocks.
"""

import math
from functools import lru_cache
from typing import List, Sequence, Union

import numpy as np
from bitarray import bitarray
from bitarray.util import ba2int

from skyline_tools.errors import ContainerFormatError, RangeQueryError
from skyline_tools.succinct.bit_directory import BitDirectory
from skyline_tools.succinct.elias_fano import WORD_BITS
from skyline_tools.succinct.packed_array import PackedArray, bits_for


@lru_cache(maxsize=None)
def _micro_table(pattern: int, width: int) -> tuple:
    """Rightmost excess minimum for every in-block range [a, c]."""
    excess = []
    level = 0
    for k in range(width):
        level += 1 if (pattern >> (width - 1 - k)) & 1 else -1
        excess.append(level)
    table = [0] * (width * width)
    for a in range(width):
        best = a
        for c in range(a, width):
            if excess[c] <= excess[best]:
                best = c
            table[a * width + c] = best
    return tuple(table)


def value_block_size(length: int) -> int:
    lg = math.log2(length) if length > 1 else 1.0
    return max(4, math.ceil(lg / 4))


class RangeMaxStructure:
    """
    Leftmost-maximum queries over X[1..s] answered from the Cartesian
    tree trace alone.

    Args:
        length (int): s.
        block_size (int): b, values per block; microblocks span 2b
            trace bits.
        trace (bitarray): The push/pop trace.
    """

    def __init__(self, length: int, block_size: int, trace: bitarray):
        self.length = length
        self.block_size = block_size
        self.trace = trace
        self.directory = BitDirectory(trace)
        self.micro = 2 * block_size
        self._index()

    @classmethod
    def build(
        cls, values: Union[np.ndarray, Sequence[int]]
    ) -> "RangeMaxStructure":
        vals = [int(v) for v in values]
        trace: List[int] = [1]
        stack: List[int] = []
        for x in vals:
            while stack and stack[-1] < x:
                stack.pop()
                trace.append(0)
            stack.append(x)
            trace.append(1)
        return cls(
            len(vals), value_block_size(len(vals)), bitarray(trace)
        )

    # -- excess helpers --------------------------------------------

    def _excess(self, pos: int) -> int:
        return 2 * self.directory.rank1(pos + 1) - (pos + 1)

    def _pick(self, p: int, q: int) -> int:
        ep, eq = self._excess(p), self._excess(q)
        if ep < eq:
            return p
        if eq < ep:
            return q
        return max(p, q)

    def _micro_bounds(self, m: int):
        start = m * self.micro
        return start, min(start + self.micro, len(self.trace))

    def _micro_query(self, m: int, a: int, c: int) -> int:
        start, stop = self._micro_bounds(m)
        width = stop - start
        pattern = ba2int(self.trace[start:stop])
        return start + _micro_table(pattern, width)[a * width + c]

    def _micro_min(self, m: int) -> int:
        start, stop = self._micro_bounds(m)
        return self._micro_query(m, 0, stop - start - 1)

    # -- index construction ----------------------------------------

    def _index(self) -> None:
        nbits = len(self.trace)
        self.num_micro = -(-nbits // self.micro)
        self.per_super = max(2, bits_for(self.num_micro))
        self.num_super = -(-self.num_micro // self.per_super)
        K = self.per_super
        min_pos = [self._micro_min(m) for m in range(self.num_micro)]
        min_val = [self._excess(p) for p in min_pos]

        def better(a: int, b: int) -> int:
            # micro block indices; a < b, later wins ties
            return a if min_val[a] < min_val[b] else b

        self.local_levels = K.bit_length() - 1
        self.local_offsets = [0] * (self.local_levels + 1)
        per_sb = 0
        for h in range(1, self.local_levels + 1):
            self.local_offsets[h] = per_sb
            per_sb += K - (1 << h) + 1
        self.local_stride = per_sb
        local = [0] * (per_sb * self.num_super)
        super_best = []
        for s in range(self.num_super):
            first = s * K
            count = min(K, self.num_micro - first)
            prev = list(range(first, first + count))
            for h in range(1, self.local_levels + 1):
                half = 1 << (h - 1)
                cur = []
                for q in range(K - (1 << h) + 1):
                    if q + half < count:
                        cur.append(better(prev[q], prev[q + half]))
                    elif q < count:
                        cur.append(prev[q])
                    else:
                        cur.append(first)
                    local[
                        s * per_sb + self.local_offsets[h] + q
                    ] = (cur[-1] - first)
                prev = cur
            best = first
            for m in range(first + 1, first + count):
                best = better(best, m)
            super_best.append(best)
        self.local = PackedArray.from_values(
            local, width=bits_for(K - 1)
        )

        self.top_levels = max(self.num_super, 1).bit_length() - 1
        self.top_offsets = [0] * (self.top_levels + 1)
        top: List[int] = list(super_best)
        prev = list(super_best)
        for h in range(1, self.top_levels + 1):
            half = 1 << (h - 1)
            self.top_offsets[h] = len(top)
            cur = [
                better(prev[q], prev[q + half])
                for q in range(self.num_super - (1 << h) + 1)
            ]
            top.extend(cur)
            prev = cur
        self.top = PackedArray.from_values(
            top, width=bits_for(max(self.num_micro - 1, 0))
        )

    # -- queries ---------------------------------------------------

    def _local_query(self, s: int, a: int, c: int) -> int:
        """Excess-min position over microblocks a..c of superblock s."""
        first = s * self.per_super
        if a == c:
            return self._micro_min(first + a)
        h = (c - a + 1).bit_length() - 1
        base = s * self.local_stride + self.local_offsets[h]
        left = first + self.local.get(base + a)
        right = first + self.local.get(base + c - (1 << h) + 1)
        return self._pick(
            self._micro_min(left), self._micro_min(right)
        )

    def _top_query(self, a: int, c: int) -> int:
        h = (c - a + 1).bit_length() - 1
        base = self.top_offsets[h]
        left = self.top.get(base + a)
        right = self.top.get(base + c - (1 << h) + 1)
        return self._pick(
            self._micro_min(left), self._micro_min(right)
        )

    def _span_query(self, a: int, c: int) -> int:
        """Excess-min position over whole microblocks a..c."""
        K = self.per_super
        sa, sc = a // K, c // K
        if sa == sc:
            return self._local_query(sa, a % K, c % K)
        best = self._pick(
            self._local_query(sa, a % K, K - 1),
            self._local_query(sc, 0, c % K),
        )
        if sc - sa > 1:
            best = self._pick(best, self._top_query(sa + 1, sc - 1))
        return best

    def excess_min(self, lo: int, hi: int) -> int:
        """Rightmost position of the minimum excess in trace[lo..hi]."""
        ml, mh = lo // self.micro, hi // self.micro
        if ml == mh:
            return self._micro_query(
                ml, lo - ml * self.micro, hi - ml * self.micro
            )
        start, stop = self._micro_bounds(ml)
        best = self._pick(
            self._micro_query(ml, lo - start, stop - start - 1),
            self._micro_query(mh, 0, hi - mh * self.micro),
        )
        if mh - ml > 1:
            best = self._pick(best, self._span_query(ml + 1, mh - 1))
        return best

    def range_max_index(self, i: int, j: int) -> int:
        """
        Smallest k in [i, j] with X[k] = max(X[i..j]) (1-based).

        Raises:
            RangeQueryError: If the range is empty or out of bounds.
        """
        if not 1 <= i <= j <= self.length:
            raise RangeQueryError(
                f"range [{i}, {j}] outside [1, {self.length}]"
            )
        lo = self.directory.select1(i + 1) - 1
        hi = self.directory.select1(j + 1)
        q = self.excess_min(lo, hi)
        return self.directory.rank1(q + 2) - 1

    def size_bits(self) -> int:
        """At most 8 bits per value plus eight words."""
        return (
            len(self.trace)
            + self.directory.size_bits()
            + self.local.size_bits()
            + self.top.size_bits()
            + 4 * WORD_BITS
        )

    def write_to(self, writer) -> None:
        writer.u64(self.length)
        writer.u32(self.block_size)
        writer.bits(self.trace)

    @classmethod
    def read_from(cls, reader) -> "RangeMaxStructure":
        length = reader.u64()
        block_size = reader.u32()
        trace = reader.bits()
        if trace.count(1) != length + 1:
            raise ContainerFormatError("range-max trace is corrupt")
        return cls(length, block_size, trace)


def range_max_index(r: RangeMaxStructure, i: int, j: int) -> int:
    return r.range_max_index(i, j)
