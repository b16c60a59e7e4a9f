"""
Seeded pseudorandom source for the instance generators.

The stream is numpy's PCG64 bit generator (PCG XSL RR 128/64) seeded through
SeedSequence, consumed only through ``random_raw`` so that golden outputs
depend on the documented, stable 64-bit bit stream and never on numpy's
higher-level sampling routines. Bounded integers use rejection sampling.
"""
from typing import List, Sequence, TypeVar

import numpy as np

from .errors import InvalidParams

T = TypeVar("T")

_SPAN = 1 << 64


class DeterministicRng:
    """Platform independent integer source; no global state"""

    def __init__(self, seed: int):
        if not 0 <= seed < _SPAN:
            raise InvalidParams("seed must be a 64-bit unsigned integer")
        self.seed = seed
        self._bitgen = np.random.PCG64(np.random.SeedSequence(seed))

    def next_u64(self) -> int:
        return int(self._bitgen.random_raw())

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound)"""
        if bound <= 0:
            raise InvalidParams("bound must be positive")
        if bound == 1:
            return 0
        limit = _SPAN - (_SPAN % bound)
        while True:
            value = self.next_u64()
            if value < limit:
                return value % bound

    def between(self, low: int, high: int) -> int:
        """Uniform integer in [low, high]"""
        if high < low:
            raise InvalidParams(f"empty range [{low}, {high}]")
        return low + self.below(high - low + 1)

    def sample(self, population: int, count: int) -> List[int]:
        """count distinct values of range(population), sorted (partial Fisher-Yates)"""
        if not 0 <= count <= population:
            raise InvalidParams(f"cannot draw {count} distinct values from {population}")
        pool = list(range(population))
        for position in range(count):
            swap = position + self.below(population - position)
            pool[position], pool[swap] = pool[swap], pool[position]
        return sorted(pool[:count])

    def choice(self, options: Sequence[T]) -> T:
        return options[self.below(len(options))]

    def spawn(self) -> "DeterministicRng":
        """Independent child stream seeded from this one"""
        return DeterministicRng(self.next_u64())
