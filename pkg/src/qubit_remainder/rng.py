"""Splittable random streams.

Every random quantity in the package is drawn from a substream addressed by
``(master_seed, *path)``. Substreams are Philox (counter-based) generators
keyed through :class:`numpy.random.SeedSequence`, so any trial can be
regenerated in isolation and results never depend on execution order.

The generator choice is part of the reproducibility contract: changing it
changes every seeded result.
"""

from __future__ import annotations

import numpy as np

GENERATOR = "numpy.random.Philox via SeedSequence(master_seed, spawn_key=path)"

# Role tags for substreams inside one trial.
STRING = 0
QUBIT = 1  # branch b of a trial uses QUBIT + b
BET = 9


def substream(master_seed: int, *path: int) -> np.random.Generator:
    """Return the generator for ``path`` under ``master_seed``."""
    if master_seed < 0:
        raise ValueError("master_seed must be non-negative")
    seq = np.random.SeedSequence(int(master_seed), spawn_key=tuple(int(p) for p in path))
    return np.random.Generator(np.random.Philox(seq))
