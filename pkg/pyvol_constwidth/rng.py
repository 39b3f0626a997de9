"""
Seeded, splittable random streams for reproducible Monte Carlo runs.

Streams are numpy PCG64 generators seeded through a SeedSequence. Child
streams come from `SeedSequence.spawn`, so a run split into fixed chunks
gives the same numbers regardless of how the chunks are scheduled.
"""
from __future__ import annotations

import numpy as np


class SeededRNG:
    """
    Wrapper around numpy.random.Generator(PCG64) for deterministic runs.
    """

    def __init__(self, seed: int | np.random.SeedSequence = 0):
        if isinstance(seed, np.random.SeedSequence):
            self._seq = seed
        else:
            if isinstance(seed, bool) or int(seed) != seed or seed < 0:
                raise ValueError("seed must be a nonnegative integer")
            self._seq = np.random.SeedSequence(int(seed))
        self._rng = np.random.Generator(np.random.PCG64(self._seq))

    @property
    def seed(self):
        return self._seq.entropy

    @property
    def generator(self) -> np.random.Generator:
        return self._rng

    def spawn(self, count: int) -> list[SeededRNG]:
        """
        Create `count` independent child streams.
        """
        return [SeededRNG(s) for s in self._seq.spawn(count)]

    def fork(self) -> SeededRNG:
        """
        Create one child stream for a sub-task. Each call gives a new child.
        """
        return self.spawn(1)[0]


def chunk_sizes(samples: int, chunk_size: int) -> list[int]:
    """
    Split `samples` into fixed chunks; the last one takes the remainder.
    """
    full, rest = divmod(int(samples), int(chunk_size))
    return [int(chunk_size)] * full + ([rest] if rest else [])
