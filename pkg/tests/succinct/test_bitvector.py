import numpy as np
import pytest
from bitarray import bitarray
from hypothesis import given, settings
from hypothesis import strategies as st
from loguru import logger

from skyline_tools.errors import RangeQueryError
from skyline_tools.succinct import (
    BitDirectory,
    SparseBitVector,
    build_sparse_bitvector,
    rank1,
    select1,
)


def _naive_rank(bits, i):
    return sum(bits[:i])


def _naive_select(bits, r):
    seen = 0
    for pos, bit in enumerate(bits, start=1):
        seen += bit
        if bit and seen == r:
            return pos
    raise AssertionError("rank past the last one")


def test_build_counts_length_and_ones():
    logger.info("Testing build_sparse_bitvector on [1,0,1,1,0]")
    vector = build_sparse_bitvector([1, 0, 1, 1, 0])
    assert len(vector) == 5
    assert vector.ones == 3
    empty = build_sparse_bitvector([])
    assert (len(empty), empty.ones) == (0, 0)
    logger.success("build_sparse_bitvector test passed!")


def test_rank1_examples():
    vector = build_sparse_bitvector([1, 0, 1, 1, 0])
    assert rank1(vector, 4) == 3
    assert rank1(vector, 1) == 1
    assert rank1(build_sparse_bitvector([0] * 5), 5) == 0


def test_rank1_rejects_out_of_range():
    vector = build_sparse_bitvector([1, 0, 1, 1, 0])
    with pytest.raises(RangeQueryError):
        rank1(vector, 0)
    with pytest.raises(RangeQueryError):
        rank1(vector, 6)
    # the method form accepts 0 as the empty prefix
    assert vector.rank1(0) == 0


def test_select1_examples():
    assert select1(build_sparse_bitvector([1, 0, 1, 1, 0]), 2) == 3
    assert select1(build_sparse_bitvector([1]), 1) == 1
    with pytest.raises(RangeQueryError):
        select1(build_sparse_bitvector([1, 0, 1, 1, 0]), 4)
    with pytest.raises(RangeQueryError):
        select1(build_sparse_bitvector([0, 0]), 1)


@pytest.mark.parametrize("density", [0.01, 0.2, 0.5, 0.9])
def test_rank_select_match_naive_scan(density):
    logger.info(f"Testing rank/select at density {density}")
    rng = np.random.default_rng(7)
    bits = (rng.random(10_000) < density).astype(int).tolist()
    vector = build_sparse_bitvector(bits)
    running = 0
    for i in range(1, len(bits) + 1):
        running += bits[i - 1]
        assert vector.rank1(i) == running
        if bits[i - 1]:
            assert vector.select1(running) == i
    assert vector.ones == running
    logger.success(f"rank/select density {density} passed!")


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 1), max_size=300))
def test_rank_select_inverse(bits):
    vector = build_sparse_bitvector(bits)
    for r in range(1, vector.ones + 1):
        pos = vector.select1(r)
        assert vector.rank1(pos) == r
        assert vector.access(pos) == 1
    assert vector.one_positions().tolist() == [
        i + 1 for i, bit in enumerate(bits) if bit
    ]


def test_from_positions_rejects_out_of_range():
    with pytest.raises(RangeQueryError):
        SparseBitVector.from_positions([0, 2], 4)
    with pytest.raises(RangeQueryError):
        SparseBitVector.from_positions([1, 5], 4)


def test_bit_directory_across_superblocks():
    rng = np.random.default_rng(3)
    raw = (rng.random(3000) < 0.3).astype(int).tolist()
    directory = BitDirectory(bitarray(raw))
    for i in range(0, len(raw) + 1, 37):
        assert directory.rank1(i) == _naive_rank(raw, i)
    for r in range(1, directory.total_ones + 1, 11):
        assert directory.select1(r) + 1 == _naive_select(raw, r)
    zeros = [1 - b for b in raw]
    for r in range(1, directory.total_zeros + 1, 13):
        assert directory.select0(r) + 1 == _naive_select(zeros, r)
