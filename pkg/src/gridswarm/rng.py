"""Seeded random source shared by the random pair strategy and the generators.

Values are drawn from the raw 64-bit output of numpy's PCG64 bit generator,
which is specified independently of the platform, and turned into bounded
integers by rejection sampling so every draw is exactly uniform.
"""

from __future__ import annotations

from typing import MutableSequence, Sequence, TypeVar

import numpy as np

T = TypeVar("T")

_SEED_LIMIT = 1 << 64


def _validate_seed(seed: int) -> int:
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise TypeError("seed must be an integer")
    if not 0 <= seed < _SEED_LIMIT:
        raise ValueError("seed must fit in an unsigned 64-bit integer")
    return seed


class SeededRandom:
    """Deterministic random stream for one run."""

    def __init__(self, seed: int) -> None:
        self.seed = _validate_seed(seed)
        self._bits = np.random.PCG64(seed)

    def next_u64(self) -> int:
        return int(self._bits.random_raw())

    def below(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)``."""

        if bound < 1:
            raise ValueError("bound must be positive")
        limit = _SEED_LIMIT - (_SEED_LIMIT % bound)
        while True:
            value = self.next_u64()
            if value < limit:
                return value % bound

    def uniform(self) -> float:
        """Uniform float in ``[0, 1)`` with 53 bits of precision."""

        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def choice(self, items: Sequence[T]) -> T:
        if not items:
            raise ValueError("cannot choose from an empty sequence")
        return items[self.below(len(items))]

    def shuffle(self, items: MutableSequence[T]) -> None:
        """Fisher-Yates shuffle in place."""

        for index in range(len(items) - 1, 0, -1):
            other = self.below(index + 1)
            items[index], items[other] = items[other], items[index]

    def sample(self, items: Sequence[T], count: int) -> list[T]:
        """``count`` distinct items, in draw order."""

        if not 0 <= count <= len(items):
            raise ValueError("sample size out of range")
        pool = list(items)
        for index in range(count):
            other = index + self.below(len(pool) - index)
            pool[index], pool[other] = pool[other], pool[index]
        return pool[:count]

    def pair_indices(self, size: int) -> tuple[int, int]:
        """Uniform unordered pair ``i < j`` of indices into ``range(size)``."""

        if size < 2:
            raise ValueError("need at least two items to form a pair")
        first = self.below(size)
        second = self.below(size - 1)
        if second >= first:
            second += 1
        return (first, second) if first < second else (second, first)


__all__ = ["SeededRandom"]
