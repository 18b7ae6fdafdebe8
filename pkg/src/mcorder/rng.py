"""Reproducible random-stream derivation.

All randomness in the package flows from numpy's PCG64 generator. Streams
are derived from a master seed plus integer context tags through
``numpy.random.SeedSequence``, so any unit of work (a surrogate, a Monte
Carlo realization) gets its own independent stream. Results are therefore
identical under any execution order or degree of parallelism.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import InvalidConfig

# context tags for derived sub-streams
TAG_SURROGATE = 1
TAG_TIEBREAK = 2
TAG_MODEL = 3
TAG_GENERATE = 4
TAG_TEST = 5

Seed = "int | Sequence[int] | None"


def resolve_seed(seed: int | Sequence[int] | None) -> tuple[int, ...]:
    """Normalize a user seed to a tuple of non-negative ints.

    ``None`` draws fresh OS entropy, so the returned tuple can be recorded
    to make the run reproducible after the fact.
    """
    if seed is None:
        return (int(np.random.SeedSequence().entropy),)
    if isinstance(seed, (int, np.integer)):
        seed = (int(seed),)
    else:
        seed = tuple(int(s) for s in seed)
    if any(s < 0 for s in seed):
        raise InvalidConfig("seeds must be non-negative integers")
    return seed


def derive(seed: int | Sequence[int], *tags: int) -> np.random.Generator:
    """PCG64 generator for the sub-stream identified by (seed, tags)."""
    entropy = list(resolve_seed(seed)) + list(tags)
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))
