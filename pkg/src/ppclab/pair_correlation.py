"""Close-pair counting and the pair-correlation statistic.

``pc_statistic`` returns ``#{i != j <= N : ||x_i - x_j|| <| s / y_N} / N``
where ``||.||`` is the nearest-integer distance, ``y`` is a scaling sequence
(``y_N = N`` for the plain statistic) and ``<|`` is ``<`` or ``<=``.

Two counters are provided.  :func:`pair_count_brute` looks at every ordered
pair and serves as the reference; :func:`pair_count_fast` sorts the prefix and
sweeps it, and must agree with the brute-force count on every input.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import RangeError
from .torus import SequenceRecord

__all__ = [
    "Scaling",
    "Predicate",
    "PcQuery",
    "scaling_value",
    "pair_count_brute",
    "pair_count_fast",
    "pc_statistic",
    "pc_curve",
    "format_curve_csv",
]


class Scaling(str, Enum):
    IDENTITY = "identity"  # y_n = n
    PLUS_SQRT = "plus-sqrt"  # y_n = n + isqrt(n)
    MINUS_SQRT = "minus-sqrt"  # y_n = max(n - isqrt(n), 1)


class Predicate(str, Enum):
    STRICT = "strict"
    NONSTRICT = "nonstrict"


def scaling_value(scaling, N: int):
    """``y_N`` for a named scaling, or the ``N``-th entry of a custom table.

    Named scalings give an ``int``; custom tables return their entry as is.
    """
    if N < 1:
        raise RangeError(f"N must be positive, got {N}")
    if isinstance(scaling, str):
        scaling = Scaling(scaling)
        if scaling is Scaling.IDENTITY:
            return N
        if scaling is Scaling.PLUS_SQRT:
            return N + math.isqrt(N)
        return max(N - math.isqrt(N), 1)
    table = scaling
    if len(table) < N:
        raise RangeError(f"custom scaling table has {len(table)} entries, need {N}")
    y = table[N - 1]
    if not y > 0:
        raise RangeError(f"scaling values must be positive, got y_{N} = {y}")
    return y


@dataclass(frozen=True)
class PcQuery:
    """One evaluation of the pair-correlation statistic.

    ``predicate=None`` picks the conventional default: strict for the identity
    scaling, non-strict for any other scaling.
    """

    N: int
    s: float | Fraction
    scaling: Scaling | str | Sequence = Scaling.IDENTITY
    predicate: Predicate | str | None = None

    def __post_init__(self):
        if self.N < 1:
            raise RangeError(f"N must be positive, got {self.N}")
        if not self.s > 0:
            raise RangeError(f"s must be positive, got {self.s}")
        if isinstance(self.scaling, str):
            object.__setattr__(self, "scaling", Scaling(self.scaling))
        if self.predicate is None:
            strict = self.scaling is Scaling.IDENTITY
            object.__setattr__(
                self, "predicate", Predicate.STRICT if strict else Predicate.NONSTRICT
            )
        else:
            object.__setattr__(self, "predicate", Predicate(self.predicate))

    @property
    def y(self):
        return scaling_value(self.scaling, self.N)

    @property
    def radius(self) -> Fraction:
        return Fraction(self.s) / Fraction(self.y)


def _check_args(points: SequenceRecord, N: int, radius, predicate):
    points.check_prefix(N)
    predicate = Predicate(predicate)
    if isinstance(radius, float) and not math.isfinite(radius):
        if radius == math.inf:
            return predicate, radius
        raise RangeError(f"radius must be a nonnegative number, got {radius}")
    if radius < 0:
        raise RangeError(f"radius must be nonnegative, got {radius}")
    return predicate, radius


def _covers_torus(radius, predicate) -> bool:
    # every torus distance is <= 1/2
    if predicate is Predicate.NONSTRICT:
        return radius >= Fraction(1, 2)
    return radius > Fraction(1, 2)


def _grid_threshold(radius, exp: int, predicate) -> int:
    """Largest integer distance D (in units of 2**-exp) with D/2**exp <| radius."""
    t = Fraction(radius) * (1 << exp)
    if predicate is Predicate.NONSTRICT:
        return math.floor(t)
    return math.ceil(t) - 1


# -- reference counter ---------------------------------------------------------


def pair_count_brute(points: SequenceRecord, N: int, radius, predicate="strict") -> int:
    """Count ordered pairs ``i != j <= N`` at torus distance ``<| radius``.

    Looks at all ``N (N - 1) / 2`` unordered pairs.  Dyadic distances are
    compared with ``radius`` exactly as rationals.
    """
    predicate, radius = _check_args(points, N, radius, predicate)
    if N < 2:
        return 0
    count = 0
    if points.exact:
        nums, exp = points.grid(N)
        full = np.int64(1) << exp
        r = Fraction(radius) if radius != math.inf else None
        tally: dict[int, int] = {}
        for i in range(N - 1):
            d = np.abs(nums[i + 1 :] - nums[i])
            d = np.minimum(d, full - d)
            vals, counts = np.unique(d, return_counts=True)
            for v, c in zip(vals.tolist(), counts.tolist()):
                tally[v] = tally.get(v, 0) + c
        for v, c in tally.items():
            dist = Fraction(v, 1 << exp)
            if r is None or (dist < r if predicate is Predicate.STRICT else dist <= r):
                count += c
    else:
        a = points.values[:N]
        r = float(radius)
        for i in range(N - 1):
            d = np.abs(a[i + 1 :] - a[i])
            d = np.minimum(d, 1.0 - d)
            hit = d < r if predicate is Predicate.STRICT else d <= r
            count += int(np.count_nonzero(hit))
    return 2 * count


# -- sweep counter -------------------------------------------------------------


def _sweep_int(a: np.ndarray, full: int, T: int) -> int:
    # a sorted int64 numerators, distances D satisfy the predicate iff D <= T
    n = a.shape[0]
    if T < 0:
        return 0
    idx = np.arange(n)
    hi = np.searchsorted(a, a + T, side="right")
    lo = np.searchsorted(a, a + (full - T), side="left")
    lo = np.maximum(lo, idx + 1)
    near = hi - idx - 1
    far = n - lo
    both = np.maximum(hi - lo, 0)
    return int(np.sum(near + far - both))


def _sweep_float(a: list, r: float, strict: bool) -> int:
    # a sorted Python floats; uses the same rounded differences as torus_distance
    n = len(a)
    total = 0
    hi = lo = 0
    for i in range(n):
        ai = a[i]
        if hi <= i:
            hi = i + 1
        if strict:
            while hi < n and a[hi] - ai < r:
                hi += 1
        else:
            while hi < n and a[hi] - ai <= r:
                hi += 1
        if lo <= i:
            lo = i + 1
        if strict:
            while lo < n and not (1.0 - (a[lo] - ai) < r):
                lo += 1
        else:
            while lo < n and not (1.0 - (a[lo] - ai) <= r):
                lo += 1
        total += (hi - i - 1) + (n - lo) - max(0, hi - lo)
    return total


class _SortedPrefix:
    """The first N points sorted once, for repeated sweeps."""

    def __init__(self, points: SequenceRecord, N: int):
        self.N = N
        self.exact = points.exact
        if self.exact:
            nums, self.exp = points.grid(N)
            self.sorted = np.sort(nums)
        else:
            self.sorted = np.sort(points.values[:N]).tolist()

    def count(self, radius, predicate: Predicate) -> int:
        N = self.N
        if N < 2:
            return 0
        if not self.exact:
            # binary64 inputs are compared against the rounded radius
            radius = float(radius)
        if _covers_torus(radius, predicate):
            return N * (N - 1)
        if self.exact:
            T = _grid_threshold(radius, self.exp, predicate)
            return 2 * _sweep_int(self.sorted, 1 << self.exp, T)
        strict = predicate is Predicate.STRICT
        return 2 * _sweep_float(self.sorted, radius, strict)


def pair_count_fast(points: SequenceRecord, N: int, radius, predicate="strict") -> int:
    """Same count as :func:`pair_count_brute` via sort and circular sweep.

    For each point in sorted order, the partners reachable without wrapping
    form a run to its right and the partners reachable across 0 form a suffix
    of the sorted list; both boundaries only move forward.  Dyadic prefixes
    are swept as integers on their common grid.
    """
    predicate, radius = _check_args(points, N, radius, predicate)
    return _SortedPrefix(points, N).count(radius, predicate)


# -- the statistic -----------------------------------------------------------


def pc_statistic(points: SequenceRecord, query: PcQuery) -> float:
    """Pair-correlation statistic ``count(N, s / y_N) / N`` for ``query``."""
    count = pair_count_fast(points, query.N, query.radius, query.predicate)
    return count / query.N


def pc_curve(points, N, s_grid, scaling=Scaling.IDENTITY, predicate=None):
    """Evaluate :func:`pc_statistic` along an increasing grid of ``s`` values.

    Returns a list of ``(s, value)`` pairs; the values are non-decreasing.
    """
    s_grid = list(s_grid)
    if not s_grid:
        return []
    if any(b <= a for a, b in zip(s_grid, s_grid[1:])):
        raise RangeError("s grid must be strictly increasing")
    queries = [PcQuery(N, s, scaling, predicate) for s in s_grid]
    points.check_prefix(N)
    prefix = _SortedPrefix(points, N)
    return [(q.s, prefix.count(q.radius, q.predicate) / N) for q in queries]


def format_curve_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["s", "F"])
    for s, value in rows:
        w.writerow([f"{float(s):.17g}", f"{float(value):.17g}"])
    return buf.getvalue()
