from typing import Iterable, Optional, Sequence, Union

import numpy as np
from bitarray import bitarray

from skyline_tools.errors import ContainerFormatError, RangeQueryError
from skyline_tools.succinct.bit_directory import BitDirectory
from skyline_tools.succinct.elias_fano import WORD_BITS, EliasFano

# Elias-Fano below this density, plain bits plus directory above it.
DENSE_RATIO = 0.25

MODE_EMPTY = 0
MODE_SPARSE = 1
MODE_DENSE = 2


class SparseBitVector:
    """
    Static bit vector X[1..s] with rank1 and select1.

    Sparse vectors (t/s <= 1/4) store the one-positions with
    Elias-Fano; dense vectors keep the raw bits and a rank directory.
    A vector without ones stores only its length.
    """

    def __init__(
        self,
        length: int,
        ones: int,
        mode: int,
        positions: Optional[EliasFano] = None,
        directory: Optional[BitDirectory] = None,
    ):
        self.length = length
        self.ones = ones
        self.mode = mode
        self._positions = positions
        self._directory = directory

    @classmethod
    def from_positions(
        cls,
        positions: Union[np.ndarray, Sequence[int]],
        length: int,
    ) -> "SparseBitVector":
        """Builds from sorted 1-based one-positions."""
        pos = np.asarray(positions, dtype=np.int64)
        t = int(pos.size)
        if t and (int(pos[0]) < 1 or int(pos[-1]) > length):
            raise RangeQueryError(
                f"one-positions must lie in [1, {length}]"
            )
        if t == 0:
            return cls(length, 0, MODE_EMPTY)
        if t <= DENSE_RATIO * length:
            ef = EliasFano.build(pos - 1, length)
            return cls(length, t, MODE_SPARSE, positions=ef)
        marks = np.zeros(length, dtype=np.uint8)
        marks[pos - 1] = 1
        bits = bitarray(endian="big")
        bits.frombytes(np.packbits(marks).tobytes())
        del bits[length:]
        return cls(
            length, t, MODE_DENSE, directory=BitDirectory(bits)
        )

    def __len__(self) -> int:
        return self.length

    def rank1(self, i: int) -> int:
        """Number of ones in X[1..i]; i = 0 is allowed and gives 0."""
        if not 0 <= i <= self.length:
            raise RangeQueryError(
                f"rank position {i} outside [1, {self.length}]"
            )
        if self.mode == MODE_EMPTY or i == 0:
            return 0
        if self.mode == MODE_SPARSE:
            return self._positions.count_leq(i - 1)
        return self._directory.rank1(i)

    def select1(self, r: int) -> int:
        """1-based position of the r-th one."""
        if not 1 <= r <= self.ones:
            raise RangeQueryError(
                f"select rank {r} outside [1, {self.ones}]"
            )
        if self.mode == MODE_SPARSE:
            return self._positions.access(r - 1) + 1
        return self._directory.select1(r) + 1

    def access(self, i: int) -> int:
        if not 1 <= i <= self.length:
            raise RangeQueryError(
                f"position {i} outside [1, {self.length}]"
            )
        return self.rank1(i) - self.rank1(i - 1)

    def one_positions(self) -> np.ndarray:
        """All 1-based one-positions, ascending."""
        if self.mode == MODE_EMPTY:
            return np.zeros(0, dtype=np.int64)
        if self.mode == MODE_SPARSE:
            return self._positions.to_numpy() + 1
        marks = np.frombuffer(
            self._directory.bits.unpack(), dtype=np.uint8
        )
        return np.flatnonzero(marks) + 1

    def size_bits(self) -> int:
        """
        At most 4.5 t (1 + lg(s/t)) bits plus six words; one word
        when there are no ones.
        """
        if self.mode == MODE_EMPTY:
            return WORD_BITS
        if self.mode == MODE_SPARSE:
            return self._positions.size_bits() + WORD_BITS
        return (
            self.length + self._directory.size_bits() + 2 * WORD_BITS
        )

    def write_to(self, writer) -> None:
        writer.u8(self.mode)
        writer.u64(self.length)
        writer.u64(self.ones)
        if self.mode == MODE_SPARSE:
            self._positions.write_to(writer)
        elif self.mode == MODE_DENSE:
            writer.bits(self._directory.bits)

    @classmethod
    def read_from(cls, reader) -> "SparseBitVector":
        mode = reader.u8()
        length = reader.u64()
        ones = reader.u64()
        if mode == MODE_EMPTY:
            return cls(length, 0, MODE_EMPTY)
        if mode == MODE_SPARSE:
            return cls(
                length,
                ones,
                MODE_SPARSE,
                positions=EliasFano.read_from(reader),
            )
        if mode == MODE_DENSE:
            bits = reader.bits()
            return cls(
                length, ones, MODE_DENSE, directory=BitDirectory(bits)
            )
        raise ContainerFormatError(f"unknown bit vector mode {mode}")


def build_sparse_bitvector(bits: Iterable[int]) -> SparseBitVector:
    """
    Builds a SparseBitVector from a zero-one sequence.

    Args:
        bits (Iterable[int]): X[1..s] as 0/1 values.

    Returns:
        SparseBitVector: The immutable rank/select structure.
    """
    arr = np.asarray(list(bits), dtype=np.int64)
    return SparseBitVector.from_positions(
        np.flatnonzero(arr) + 1, int(arr.size)
    )


def rank1(vector: SparseBitVector, i: int) -> int:
    if i == 0:
        raise RangeQueryError("rank position 0 outside [1, s]")
    return vector.rank1(i)


def select1(vector: SparseBitVector, r: int) -> int:
    return vector.select1(r)
