"""Sobol' sequence generation with optional Owen-style scrambling.

Points are built by the Gray-code recurrence over binary direction
vectors expanded from an embedded published initializer table, then
optionally scrambled per coordinate with seeded nested uniform digit
randomization, which preserves the sequence's dyadic stratification
properties while breaking its alignments.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from ._sobol_directions import DIRECTIONS, MAX_DIMENSION
from .design import DesignMatrix

__all__ = ["SobolConfig", "SobolScramble", "generate_sobol", "MAX_DIMENSION"]


class SobolScramble(enum.Enum):
    NONE = "none"
    OWEN_NESTED = "owen-nested"


@dataclass(frozen=True)
class SobolConfig:
    """Parameters of one Sobol' point stream.

    ``skip`` drops initial points and defaults to 1 so the origin,
    which ruins distance-based diagnostics, never appears.  ``bit_depth``
    is the number of binary digits generated (and scrambled) per
    coordinate; 30 keeps every coordinate an exact dyadic rational well
    inside double precision.
    """

    dimension: int
    skip: int = 1
    scramble: SobolScramble = SobolScramble.NONE
    seed: int | None = None
    bit_depth: int = 30

    def __post_init__(self) -> None:
        if isinstance(self.scramble, str):
            object.__setattr__(self, "scramble", SobolScramble(self.scramble))
        if not 1 <= self.dimension <= MAX_DIMENSION:
            raise ValueError(
                f"dimension must be in 1..{MAX_DIMENSION}, got {self.dimension}"
            )
        if self.skip < 0:
            raise ValueError(f"skip must be >= 0, got {self.skip}")
        if not 1 <= self.bit_depth <= 53:
            raise ValueError(f"bit_depth must be in 1..53, got {self.bit_depth}")
        if self.scramble is SobolScramble.OWEN_NESTED and self.seed is None:
            raise ValueError("scrambling requires a seed")


def _direction_vectors(dimension: int, bits: int) -> np.ndarray:
    """Per-coordinate direction integers V[j, k], k < bits, as uint64."""
    v = np.zeros((dimension, bits), dtype=np.uint64)
    # coordinate 0: van der Corput, v_k = 2^(bits-1-k)
    for k in range(bits):
        v[0, k] = 1 << (bits - 1 - k)
    for j in range(1, dimension):
        s, a, m = DIRECTIONS[j - 1]
        vj = [0] * bits
        for k in range(min(s, bits)):
            vj[k] = m[k] << (bits - 1 - k)
        for k in range(s, bits):
            val = vj[k - s] ^ (vj[k - s] >> s)
            for i in range(1, s):
                if (a >> (s - 1 - i)) & 1:
                    val ^= vj[k - i]
            vj[k] = val
        v[j] = vj
    return v


def _raw_sobol_ints(n_total: int, dimension: int, bits: int) -> np.ndarray:
    """First ``n_total`` Gray-code Sobol' points as integers in [0, 2^bits)."""
    v = _direction_vectors(dimension, bits)
    out = np.zeros((n_total, dimension), dtype=np.uint64)
    x = np.zeros(dimension, dtype=np.uint64)
    for i in range(1, n_total):
        # lowest set bit of i selects the direction vector
        c = (i & -i).bit_length() - 1
        x = x ^ v[:, c]
        out[i] = x
    return out


_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


def _splitmix64(z: np.ndarray) -> np.ndarray:
    # wrap-around modulo 2^64 is the point of this mixing function
    with np.errstate(over="ignore"):
        z = (z + _GOLDEN).astype(np.uint64)
        z = (z ^ (z >> np.uint64(30))) * _MIX1
        z = (z ^ (z >> np.uint64(27))) * _MIX2
        return z ^ (z >> np.uint64(31))


def _owen_scramble_ints(ints: np.ndarray, bits: int, seed: int) -> np.ndarray:
    """Nested uniform digit scrambling of dyadic integers, per coordinate.

    Digit k of each point is flipped by a pseudo-random bit keyed on the
    coordinate and on the point's k-1 leading original digits, so all
    points sharing a digit prefix receive the same flip: a random walk
    down one binary tree per coordinate.
    """
    n, d = ints.shape
    out = ints.copy()
    for j in range(d):
        y = ints[:, j]
        with np.errstate(over="ignore"):
            ckey = _splitmix64(np.uint64(seed) ^ (np.uint64(j + 1) * _GOLDEN))
        for k in range(1, bits + 1):
            prefix = y >> np.uint64(bits - k + 1)
            # tag the level so distinct tree nodes get distinct keys
            node = prefix | (np.uint64(1) << np.uint64(k - 1))
            flip = _splitmix64(node ^ ckey) & np.uint64(1)
            out[:, j] ^= flip << np.uint64(bits - k)
    return out


def generate_sobol(n: int, config: SobolConfig) -> DesignMatrix:
    """First ``n`` Sobol' points (after the configured skip).

    Unscrambled points are exact dyadic rationals with denominator
    ``2^bit_depth``; scrambled streams are deterministic functions of
    the seed.

    Examples
    --------
    >>> generate_sobol(3, SobolConfig(dimension=2)).matrix
    array([[0.5 , 0.5 ],
           [0.75, 0.25],
           [0.25, 0.75]])
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    bits = config.bit_depth
    ints = _raw_sobol_ints(config.skip + n, config.dimension, bits)[config.skip :]
    if config.scramble is SobolScramble.OWEN_NESTED:
        assert config.seed is not None
        ints = _owen_scramble_ints(ints, bits, config.seed)
    return DesignMatrix(ints.astype(float) / float(1 << bits))
