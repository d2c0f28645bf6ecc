"""
Block-local queries over a signature of (child, within-child x-rank)
pairs. A signature fixes the relative x-order of its points (slab
first, then rank) and their y-order (list order), so every block query
is a function of the signature and its arguments alone.

Block indices are 1-based; missing answers are None.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Tuple

from skyline_tools.succinct.packed_array import bits_for


def slab_width(delta: int) -> int:
    return max(1, bits_for(delta - 1))


def rank_width(delta: int) -> int:
    return max(1, bits_for(delta * delta - 1))


@dataclass(frozen=True)
class BlockSignature:
    """Pairs (j, r) of a block's points in ascending y."""

    pairs: Tuple[Tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.pairs)

    @classmethod
    def decode(
        cls, value: int, count: int, delta: int
    ) -> "BlockSignature":
        wj, wr = slab_width(delta), rank_width(delta)
        mask_r = (1 << wr) - 1
        mask_pair = (1 << (wj + wr)) - 1
        pairs = []
        for k in range(count - 1, -1, -1):
            pair = (value >> (k * (wj + wr))) & mask_pair
            pairs.append(((pair >> wr) + 1, (pair & mask_r) + 1))
        return cls(tuple(pairs))

    def encode(self, delta: int) -> int:
        wr = rank_width(delta)
        value = 0
        for j, r in self.pairs:
            value = (value << (slab_width(delta) + wr)) | (
                ((j - 1) << wr) | (r - 1)
            )
        return value

    @staticmethod
    def pair_width(delta: int) -> int:
        return slab_width(delta) + rank_width(delta)


def block_below(sig: BlockSignature, t: int, i: int) -> int:
    """Points among p_1..p_t lying in slab i."""
    return sum(1 for j, _ in sig.pairs[:t] if j == i)


def block_rightmost(
    sig: BlockSignature, b: int, t: int, i: int, j: int
) -> Optional[int]:
    best = None
    best_key = None
    for ell in range(b, t + 1):
        key = sig.pairs[ell - 1]
        if i <= key[0] <= j and (best_key is None or key > best_key):
            best, best_key = ell, key
    return best


def block_topmost(
    sig: BlockSignature, b: int, t: int, i: int, j: int
) -> Optional[int]:
    for ell in range(t, b - 1, -1):
        if i <= sig.pairs[ell - 1][0] <= j:
            return ell
    return None


def block_skycount(
    sig: BlockSignature, b: int, t: int, i: int, j: int
) -> int:
    count = 0
    best_key = None
    for ell in range(t, b - 1, -1):
        key = sig.pairs[ell - 1]
        if i <= key[0] <= j and (best_key is None or key > best_key):
            count += 1
            best_key = key
    return count


class BlockEvaluator:
    """
    Evaluates block queries, optionally through bounded LRU caches
    keyed by the signature plus the arguments.

    Args:
        memo_capacity (int): Entries per cached operation; 0 disables
            memoization.
    """

    def __init__(self, memo_capacity: int = 0):
        self.memo_capacity = memo_capacity
        self.below = self._wrap(block_below)
        self.rightmost = self._wrap(block_rightmost)
        self.topmost = self._wrap(block_topmost)
        self.skycount = self._wrap(block_skycount)

    def _wrap(self, fn: Callable) -> Callable:
        if self.memo_capacity <= 0:
            return fn
        return lru_cache(maxsize=self.memo_capacity)(fn)

    def cache_info(self) -> dict:
        if self.memo_capacity <= 0:
            return {}
        return {
            name: getattr(self, name).cache_info()._asdict()
            for name in ("below", "rightmost", "topmost", "skycount")
        }
