"""Seeded random streams.

Every random draw in the package comes from numpy's ``PCG64`` bit
generator seeded with a 64-bit unsigned integer; normal variates use
numpy's ziggurat ``standard_normal``. Changing either is a format break
and must bump :data:`GENERATOR_ID`.
"""

import numpy as np

from .errors import InvalidParameterError

GENERATOR_ID = "numpy-pcg64+ziggurat-normal/v1"

_MASK64 = (1 << 64) - 1
_GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def check_seed(seed) -> int:
    if isinstance(seed, bool) or int(seed) != seed or not 0 <= seed <= _MASK64:
        raise InvalidParameterError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return int(seed)


def make_generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(check_seed(seed)))


def splitmix64(x: int) -> int:
    """SplitMix64 output function (Steele, Lea & Flood 2014)."""
    z = (x + _GOLDEN_GAMMA) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def substream_seed(seed: int, index: int) -> int:
    """Seed for the ``index``-th independent substream of ``seed``.

    ``splitmix64(splitmix64(seed) ^ index)``; stable across platforms.
    """
    return splitmix64(splitmix64(check_seed(seed)) ^ (index & _MASK64))
