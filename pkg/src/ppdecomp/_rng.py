"""Seed derivation helpers.

Every randomized routine takes an explicit integer seed and derives
sub-streams through ``numpy.random.SeedSequence`` spawn keys, so that
serial and (externally) parallel execution consume identical streams.
"""

from __future__ import annotations

import numpy as np

# Stream tags; fixed for reproducibility across releases.
STREAM_NOISE = 0        # noise-replicate imputation, one child per view
STREAM_REPLICATE = 1    # one child per bootstrap replicate
STREAM_PAIR = 2         # one child per view pair in the multi-view path
STREAM_RANKS = 3        # rank misspecification draws
STREAM_CELL = 4         # benchmark grid cells


def derive_rng(seed: int, *key: int) -> np.random.Generator:
    """Generator for the sub-stream identified by ``key`` under ``seed``."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.default_rng(ss)


def derive_seed(seed: int, *key: int) -> int:
    """A 64-bit integer seed for the sub-stream identified by ``key``."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return int(ss.generate_state(2, np.uint32).view(np.uint64)[0])
