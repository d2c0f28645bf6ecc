import numpy as np
import pytest
from loguru import logger

from skyline_tools.errors import RangeQueryError
from skyline_tools.succinct import RangeMaxStructure, range_max_index


def _naive(values, i, j):
    window = values[i - 1 : j]
    return i + window.index(max(window))


def test_range_max_examples():
    logger.info("Testing range_max_index examples")
    r = RangeMaxStructure.build([5, 1, 5, 2])
    assert range_max_index(r, 1, 4) == 1
    assert range_max_index(r, 2, 3) == 3
    assert range_max_index(r, 4, 4) == 4
    assert range_max_index(RangeMaxStructure.build([1, 9, 3]), 2, 2) == 2
    logger.success("range_max_index examples passed!")


def test_range_max_errors():
    r = RangeMaxStructure.build([1, 9, 3])
    for i, j in [(0, 1), (2, 1), (1, 4)]:
        with pytest.raises(RangeQueryError):
            r.range_max_index(i, j)


def test_range_max_exhaustive_short_arrays():
    rng = np.random.default_rng(5)
    for trial in range(60):
        length = int(rng.integers(1, 65))
        # small value range forces ties
        values = rng.integers(0, 6, size=length).tolist()
        r = RangeMaxStructure.build(values)
        for i in range(1, length + 1):
            for j in range(i, length + 1):
                assert r.range_max_index(i, j) == _naive(values, i, j), (
                    f"trial {trial}: {values} ({i}, {j})"
                )


@pytest.mark.slow
def test_range_max_long_array_sampled():
    rng = np.random.default_rng(9)
    values = rng.integers(0, 1000, size=20_000).tolist()
    r = RangeMaxStructure.build(values)
    for _ in range(2000):
        i, j = sorted(int(v) for v in rng.integers(1, 20_001, size=2))
        assert r.range_max_index(i, j) == _naive(values, i, j)
