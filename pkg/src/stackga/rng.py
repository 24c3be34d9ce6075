"""Deterministic RNG derivation.

Every random choice in the package flows from one master seed through
`child_rng`, so independent tasks (forest trees, CV folds, GA subpopulations)
get reproducible, decorrelated streams no matter the execution order.
"""

import hashlib

import numpy as np


def derive_seed(seed: int, *tags) -> int:
    """Map (seed, tags...) to a stable 64-bit child seed.

    Tags may be ints or strings; the mapping must not change between
    releases, or saved configs stop reproducing old runs.
    """
    key = repr((int(seed),) + tuple(tags)).encode()
    digest = hashlib.sha256(key).digest()
    return int.from_bytes(digest[:8], "little")


def child_rng(seed: int, *tags) -> np.random.Generator:
    """Generator seeded by `derive_seed(seed, *tags)`."""
    return np.random.default_rng(derive_seed(seed, *tags))
