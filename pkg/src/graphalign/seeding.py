"""Deterministic substream seeding.

Every source of randomness in the package is a numpy Generator seeded
through :func:`mix`, a SplitMix64-style mixer.  Substreams are derived
from a base seed plus integer tags, so independent parts of a pipeline
(parent graph, each child, each permutation, latent data, each
experiment cell) get decorrelated, reproducible streams without any
coordination.

Mixing constants are the standard SplitMix64 finalizer:

    z  = x + 0x9E3779B97F4A7C15
    z ^= z >> 30;  z *= 0xBF58476D1CE4E5B9
    z ^= z >> 27;  z *= 0x94D049BB133111EB
    z ^= z >> 31
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1

# Stream tags used by sampling.sample_family.
TAG_PARENT = 1
TAG_CHILD = 2
TAG_PERM = 3
TAG_LATENT = 4


def splitmix64(x: int) -> int:
    """One SplitMix64 avalanche step on a 64-bit value."""
    z = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK64
    return z ^ (z >> 31)


def mix(seed: int, *tags: int) -> int:
    """Derive a substream seed from ``seed`` and a sequence of integer tags.

    Chains one avalanche step per tag: ``h = splitmix64(h ^ tag)``.
    """
    h = seed & _MASK64
    for t in tags:
        h = splitmix64(h ^ (int(t) & _MASK64))
    return h


def rng_from(seed: int, *tags: int) -> np.random.Generator:
    """PCG64 generator for the substream identified by ``seed`` and ``tags``."""
    return np.random.Generator(np.random.PCG64(mix(seed, *tags)))
