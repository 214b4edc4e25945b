"""Seeded random streams.

Every random draw in the package comes from a PCG64 generator keyed by
``SeedSequence(master_seed, spawn_key=key)``. Monte Carlo trial ``t`` uses
``key = (t,)``; chunk ``c`` of Voronoi probes uses ``key = (VORONOI_STREAM, c)``.
Within a stream, sample points are drawn row by row, coordinates in order,
so point ``j`` of trial ``t`` is a pure function of ``(seed, t, j)``. Results
therefore do not depend on how trials are scheduled across workers.
"""
from __future__ import annotations

import secrets

import numpy as np

VORONOI_STREAM = 2**32 - 1


def stream(seed: int, *key: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=key)))


def fresh_seed() -> int:
    """A 63-bit seed drawn from system entropy."""
    return secrets.randbits(63)
