"""Reference sequences and the seeded generator shared by all random code."""

from __future__ import annotations

import math

import numpy as np

from .errors import RangeError
from .torus import SequenceRecord

__all__ = [
    "GOLDEN",
    "RngState",
    "derive_seeds",
    "kronecker",
    "iid_uniform",
    "equispaced",
]

MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

#: (sqrt(5) - 1) / 2 rounded to binary64
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _check_seed(seed) -> int:
    seed = int(seed)
    if not 0 <= seed <= MASK64:
        raise RangeError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed


class RngState:
    """SplitMix64.

    The state advances by a fixed odd constant and each output is a mixed
    copy of the new state, so the ``k``-th output depends only on
    ``seed + k * gamma``.  That makes block draws vectorisable and the stream
    identical on every platform.  Not thread-safe; give each task its own
    instance (see :func:`derive_seeds`).
    """

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = _check_seed(seed)

    def next(self) -> int:
        self.state = (self.state + _GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * _MIX1) & MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & MASK64
        return z ^ (z >> 31)

    def draws(self, n: int) -> np.ndarray:
        """The next ``n`` outputs as a uint64 array."""
        if n < 0:
            raise RangeError(f"cannot draw {n} values")
        z = np.arange(1, n + 1, dtype=np.uint64)
        z *= np.uint64(_GAMMA)
        z += np.uint64(self.state)
        self.state = (self.state + n * _GAMMA) & MASK64
        z ^= z >> np.uint64(30)
        z *= np.uint64(_MIX1)
        z ^= z >> np.uint64(27)
        z *= np.uint64(_MIX2)
        z ^= z >> np.uint64(31)
        return z


def derive_seeds(seed: int, count: int) -> list[int]:
    """Per-task seeds: task ``t`` gets the ``t``-th output of a master stream."""
    return RngState(seed).draws(count).tolist()


def kronecker(alpha: float, n: int) -> SequenceRecord:
    """Fractional parts of ``alpha * k`` for ``k = 1..n``.

    ``alpha`` is taken as the binary64 number it is; the products are reduced
    modulo 1 exactly and rounded once, so the points do not drift as ``k``
    grows.  Rational ``alpha`` is allowed and gives a periodic sequence.
    """
    if n < 1:
        raise RangeError(f"n must be positive, got {n}")
    p, q = float(alpha).as_integer_ratio()
    values = [(p * k % q) / q for k in range(1, n + 1)]
    return SequenceRecord.from_floats(values, kind="kronecker", meta={"alpha": float(alpha)})


def iid_uniform(n: int, seed: int) -> SequenceRecord:
    """``n`` independent uniform points, ``x_k = draw_k / 2**64``.

    The division is rounded to nearest, which can give 1.0 for the top few
    draws; those are pulled down to the largest float below 1.
    """
    if n < 1:
        raise RangeError(f"n must be positive, got {n}")
    seed = _check_seed(seed)
    x = RngState(seed).draws(n).astype(np.float64) * 2.0**-64
    np.minimum(x, math.nextafter(1.0, 0.0), out=x)
    return SequenceRecord.from_floats(x, kind="iid", seed=seed)


def equispaced(n: int) -> SequenceRecord:
    """The points ``k / n``, exact when ``n`` is a power of two."""
    if n < 1:
        raise RangeError(f"n must be positive, got {n}")
    if n & (n - 1) == 0:
        e = n.bit_length() - 1
        if e <= 62:
            return SequenceRecord.from_dyadic(
                np.arange(n, dtype=np.int64), np.full(n, e), kind="equispaced"
            )
    return SequenceRecord.from_floats(np.arange(n) / n, kind="equispaced")
