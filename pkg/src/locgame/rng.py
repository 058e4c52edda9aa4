"""Seed derivation.

Every random stream in the package is a ``numpy.random.Generator`` over
PCG64, seeded with a 64-bit integer. Child seeds are derived with
:func:`mix64`, a SplitMix64 step: the index is multiplied by the odd golden
ratio constant ``0x9E3779B97F4A7C15``, added to the parent seed, and passed
through the SplitMix64 xor-shift/multiply finalizer. This makes trial ``i``
of an experiment independent of how trials are scheduled.
"""
import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def mix64(seed: int, index: int) -> int:
    z = (int(seed) + (int(index) + 1) * GOLDEN_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive(seed: int, *path: int) -> int:
    """Fold a path of indices into ``seed`` with repeated :func:`mix64`."""
    for index in path:
        seed = mix64(seed, index)
    return int(seed) & MASK64


def make_rng(seed: int, *path: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(derive(seed, *path)))
