import numpy as np
import pytest
from loguru import logger

from skyline_tools.errors import ParameterError, RangeQueryError
from skyline_tools.succinct import (
    EliasFano,
    PackedArray,
    bits_for,
    build_prefix_sums,
)


def test_prefix_sums_examples():
    logger.info("Testing build_prefix_sums on small inputs")
    zeros = build_prefix_sums([0, 0, 0])
    assert zeros.prefix(3) == 0
    seq = build_prefix_sums([2, 0, 1])
    assert seq.prefix(2) == 2
    assert seq.lookup(3) == 1
    assert seq.prefix(0) == 0
    assert seq.range_sum(2, 3) == 1
    assert seq.range_sum(3, 2) == 0
    logger.success("build_prefix_sums test passed!")


def test_prefix_sums_errors():
    seq = build_prefix_sums([2, 0, 1])
    with pytest.raises(RangeQueryError):
        seq.prefix(4)
    with pytest.raises(RangeQueryError):
        seq.lookup(0)
    with pytest.raises(ParameterError):
        build_prefix_sums([1, -1])


def test_prefix_sums_match_naive_scan():
    rng = np.random.default_rng(11)
    values = rng.integers(0, 8, size=10_000)
    seq = build_prefix_sums(values)
    expected = np.concatenate([[0], np.cumsum(values)])
    for i in range(0, values.size + 1, 7):
        assert seq.prefix(i) == int(expected[i])
    for i in range(1, values.size + 1, 13):
        assert seq.lookup(i) == int(values[i - 1])
    assert seq.total == int(expected[-1])


def test_elias_fano_access_and_count():
    values = [0, 0, 3, 7, 7, 8, 30, 31]
    ef = EliasFano.build(values, 32)
    assert [ef.access(r) for r in range(len(values))] == values
    assert ef.count_leq(-1) == 0
    assert ef.count_leq(0) == 2
    assert ef.count_leq(6) == 3
    assert ef.count_leq(7) == 5
    assert ef.count_leq(29) == 6
    assert ef.count_leq(100) == len(values)
    with pytest.raises(ParameterError):
        EliasFano.build([3, 1], 8)
    with pytest.raises(ParameterError):
        EliasFano.build([9], 8)


def test_packed_array_widths():
    assert bits_for(0) == 0
    assert bits_for(1) == 1
    assert bits_for(255) == 8
    packed = PackedArray.from_values([5, 0, 7, 2])
    assert packed.width == 3
    assert packed.to_numpy().tolist() == [5, 0, 7, 2]
    assert packed.get_span(1, 3) == (0 << 3) | 7
    zero = PackedArray.from_values([0, 0])
    assert zero.width == 0 and zero.get(1) == 0
    with pytest.raises(ParameterError):
        PackedArray.from_values([8], width=3)
    with pytest.raises(RangeQueryError):
        packed.get(4)
