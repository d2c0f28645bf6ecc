from skyline_tools.succinct.bit_directory import BitDirectory
from skyline_tools.succinct.bitvector import (
    SparseBitVector,
    build_sparse_bitvector,
    rank1,
    select1,
)
from skyline_tools.succinct.elias_fano import EliasFano
from skyline_tools.succinct.packed_array import PackedArray, bits_for
from skyline_tools.succinct.prefix_sums import (
    MonotoneSequence,
    build_prefix_sums,
)
from skyline_tools.succinct.range_max import (
    RangeMaxStructure,
    range_max_index,
)

__all__ = [
    "BitDirectory",
    "EliasFano",
    "MonotoneSequence",
    "PackedArray",
    "RangeMaxStructure",
    "SparseBitVector",
    "bits_for",
    "build_prefix_sums",
    "build_sparse_bitvector",
    "range_max_index",
    "rank1",
    "select1",
]
