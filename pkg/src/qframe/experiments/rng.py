"""Seeded randomness.

All experiments draw from numpy's PCG64 bit generator (64-bit outputs) seeded
through ``SeedSequence``; independent streams are made with
``SeedSequence.spawn``, so results depend only on the integer seed.
"""

from __future__ import annotations

import numpy as np


def generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def streams(seed: int, n: int) -> list[np.random.Generator]:
    return [np.random.Generator(np.random.PCG64(s)) for s in np.random.SeedSequence(seed).spawn(n)]
