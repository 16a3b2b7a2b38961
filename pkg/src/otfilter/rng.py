"""Deterministic random-stream derivation.

Every stochastic component of a run draws from its own generator, derived
from one master seed and an integer purpose key.  Streams are therefore
independent of the order in which components execute, which is what makes
block-parallel filtering reproducible.

Purpose keys used by the harness:

====================  =========================================
``TRUTH_INIT``        initial fields of the reference trajectory
``TRUTH_NOISE``       process noise of the reference trajectory
``OBS_NOISE``         measurement noise of the synthetic data
``PRIOR_FIELD``       initial state ensemble
``PRIOR_PARAM``       initial parameter hypotheses
``FILTER_BLOCK``      per-hypothesis filter noise (key + block index)
====================  =========================================
"""

from __future__ import annotations

import numpy as np

TRUTH_INIT = 0
TRUTH_NOISE = 1
OBS_NOISE = 2
PRIOR_FIELD = 3
PRIOR_PARAM = 4
FILTER_BLOCK = 5


def substream(master_seed: int, *key: int) -> np.random.Generator:
    """Return the generator identified by ``(master_seed, key)``.

    The same arguments always return a generator in the same state, and
    distinct keys give statistically independent streams.
    """
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=tuple(key)))


def block_streams(master_seed: int, n_blocks: int) -> list[np.random.Generator]:
    """One independent stream per hypothesis block."""
    return [substream(master_seed, FILTER_BLOCK, i) for i in range(n_blocks)]
