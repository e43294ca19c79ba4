"""Gap profiles: distinct neighbouring gap lengths and their multiplicities.

The gaps of a prefix ``x_1..x_N`` are the ``N`` forward arcs between
consecutive points in sorted order, including the arc that wraps from the
largest point back to the smallest.  They always sum to 1, which is why arcs
are used rather than nearest-integer distances.  Coincident points produce
gaps of length 0; a prefix whose points all coincide has a single gap of
length 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .errors import UsageError
from .torus import SequenceRecord

DEFAULT_TOL = 1e-12

__all__ = [
    "GapProfile",
    "GapRow",
    "gap_profile",
    "gap_series",
    "format_length",
    "DEFAULT_TOL",
]


def format_length(x) -> str | float:
    """JSON rendering of a gap length: ``"num/2^exp"`` for exact values."""
    if isinstance(x, Fraction):
        den = x.denominator
        return f"{x.numerator}/2^{den.bit_length() - 1}"
    return float(x)


@dataclass(frozen=True)
class GapProfile:
    N: int
    lengths: tuple
    multiplicities: tuple

    @property
    def g(self) -> int:
        return len(self.lengths)

    @property
    def max_phi(self) -> int:
        return max(self.multiplicities)

    @property
    def max_ratio(self) -> float:
        return self.max_phi / self.N

    def total_length(self):
        return sum(l * m for l, m in zip(self.lengths, self.multiplicities))

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "g": self.g,
            "lengths": [format_length(l) for l in self.lengths],
            "multiplicities": list(self.multiplicities),
            "max_ratio": self.max_ratio,
        }


class GapRow(NamedTuple):
    N: int
    g: int
    max_phi: int
    max_ratio: float


def _group_floats(gaps: np.ndarray, tol: float):
    gaps = np.sort(gaps)
    breaks = np.flatnonzero(np.diff(gaps) > tol) + 1
    lengths, mult = [], []
    for chunk in np.split(gaps, breaks):
        lengths.append(float(chunk.mean()))
        mult.append(int(chunk.size))
    return tuple(lengths), tuple(mult)


def gap_profile(points: SequenceRecord, N: int, dedup_tol: float | None = None) -> GapProfile:
    """Gap profile of the first ``N`` points.

    Dyadic gaps are grouped by exact equality.  Binary64 gaps are grouped by
    single linkage: sorted gaps whose successive differences are at most
    ``dedup_tol`` (default ``1e-12``) form one length, reported as the group
    mean.
    """
    points.check_prefix(N)
    if points.exact:
        if dedup_tol:
            raise UsageError("dedup_tol must be 0 for dyadic sequences")
        nums, exp = points.grid(N)
        a = np.sort(nums)
        full = 1 << exp
        gaps = np.append(np.diff(a), a[0] + full - a[-1])
        vals, counts = np.unique(gaps, return_counts=True)
        lengths = tuple(Fraction(v, full) for v in vals.tolist())
        return GapProfile(N, lengths, tuple(counts.tolist()))
    tol = DEFAULT_TOL if dedup_tol is None else float(dedup_tol)
    if tol < 0:
        raise UsageError(f"dedup_tol must be nonnegative, got {tol}")
    a = np.sort(points.values[:N])
    gaps = np.append(np.diff(a), (1.0 - a[-1]) + a[0])
    return GapProfile(N, *_group_floats(gaps, tol))


def gap_series(points: SequenceRecord, checkpoints, dedup_tol: float | None = None) -> list[GapRow]:
    """Summaries ``(N, g(N), max multiplicity, max multiplicity / N)``.

    Since the multiplicities add up to ``N``, every row satisfies
    ``g >= N / max_phi``.
    """
    checkpoints = list(checkpoints)
    if any(b <= a for a, b in zip(checkpoints, checkpoints[1:])):
        raise UsageError("checkpoints must be strictly increasing")
    rows = []
    for N in checkpoints:
        prof = gap_profile(points, N, dedup_tol)
        rows.append(GapRow(N, prof.g, prof.max_phi, prof.max_ratio))
    return rows
