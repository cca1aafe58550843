"""Seeded random streams.

Every random draw in the package goes through a ``numpy.random.Generator``
passed in explicitly. Independent streams for a (run, round, trial) triple are
derived from one master seed with :class:`numpy.random.SeedSequence` spawn keys
and the counter-based Philox bit generator, so results do not depend on the
order in which streams are consumed.
"""

from __future__ import annotations

import numpy as np


def stream(seed: int | None, *keys: int) -> np.random.Generator:
    """Return the generator for ``seed`` and the integer path ``keys``."""
    ss = np.random.SeedSequence(seed, spawn_key=tuple(int(k) for k in keys))
    return np.random.Generator(np.random.Philox(ss))


def child(rng: np.random.Generator, *keys: int) -> np.random.Generator:
    """Derive an independent generator from ``rng`` without advancing it by more than one draw."""
    base = int(rng.integers(0, 2**63 - 1))
    return stream(base, *keys)


def as_generator(rng: np.random.Generator | int | None) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return stream(rng)
