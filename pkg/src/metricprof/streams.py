"""Seeded random streams keyed by their role in a computation.

A stream is fully determined by the master seed, a purpose tag and integer
grid coordinates, so the order in which independent tasks run never changes
what they draw.
"""
import zlib

import numpy as np

DEFAULT_SEED = 20080527


def stream(master_seed: int, purpose: str, *coords: int) -> np.random.Generator:
    tag = zlib.crc32(purpose.encode("utf-8"))
    seq = np.random.SeedSequence(int(master_seed), spawn_key=(tag, *map(int, coords)))
    return np.random.Generator(np.random.Philox(seq))


def as_generator(rng) -> np.random.Generator:
    """Accept a Generator, an int seed, or None."""
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)
