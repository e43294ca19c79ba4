"""Points on the torus [0, 1): exact dyadic and binary64 representations.

A point is either a :class:`DyadicPoint` (``num / 2**exp`` in canonical form)
or a plain Python ``float`` in ``[0, 1)``.  Sequences of points are stored in
:class:`SequenceRecord`, which keeps the points in numpy arrays and carries a
little provenance metadata so that outputs can be reproduced.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import FormatError, RangeError

MAX_EXP = 62

__all__ = [
    "MAX_EXP",
    "DyadicPoint",
    "dyadic_make",
    "torus_distance",
    "arc_gap",
    "canonicalize",
    "SequenceRecord",
    "format_sequence",
    "parse_sequence",
    "write_sequence",
    "read_sequence",
]


@dataclass(frozen=True, order=True)
class DyadicPoint:
    """The torus point ``num / 2**exp`` in canonical (reduced) form.

    Construct through :func:`dyadic_make` unless the pair is already known to
    be canonical; the constructor rejects non-canonical pairs so that equal
    values always compare equal.
    """

    num: int
    exp: int

    def __post_init__(self):
        num, exp = self.num, self.exp
        if not (0 <= exp <= MAX_EXP) or not (0 <= num < (1 << exp)):
            raise RangeError(f"dyadic point out of range: {num}/2^{exp}")
        if (num == 0 and exp != 0) or (num != 0 and num % 2 == 0):
            raise RangeError(f"dyadic point not canonical: {num}/2^{exp}")

    @property
    def value(self) -> Fraction:
        return Fraction(self.num, 1 << self.exp)

    def __float__(self) -> float:
        return self.num / (1 << self.exp)

    def scaled(self, exp: int) -> int:
        """Numerator of this point on the grid ``1 / 2**exp``."""
        if exp < self.exp:
            raise RangeError(f"grid 1/2^{exp} is coarser than {self}")
        return self.num << (exp - self.exp)

    def __str__(self):
        return f"{self.num}/2^{self.exp}"


ZERO = DyadicPoint(0, 0)


def dyadic_make(num: int, exp: int) -> DyadicPoint:
    """Reduce ``num / 2**exp`` to canonical form.

    >>> dyadic_make(4, 3)
    DyadicPoint(num=1, exp=1)
    """
    num, exp = int(num), int(exp)
    if not (0 <= exp <= MAX_EXP) or not (0 <= num < (1 << exp)):
        raise RangeError(f"dyadic point out of range: {num}/2^{exp}")
    if num == 0:
        return ZERO
    tz = (num & -num).bit_length() - 1
    return DyadicPoint(num >> tz, exp - tz)


def _check_same_repr(p, q):
    if isinstance(p, DyadicPoint) and isinstance(q, DyadicPoint):
        return True
    if isinstance(p, float) and isinstance(q, float):
        return False
    raise TypeError(
        f"points must share a representation, got {type(p).__name__} "
        f"and {type(q).__name__}"
    )


def torus_distance(p, q):
    """Nearest-integer distance ``min(d, 1 - d)`` with ``d = |p - q|``.

    Exact for dyadic inputs (returns a :class:`DyadicPoint`), binary64 for
    floats.  The result never exceeds 1/2.
    """
    if _check_same_repr(p, q):
        e = max(p.exp, q.exp)
        d = abs(p.scaled(e) - q.scaled(e))
        return dyadic_make(min(d, (1 << e) - d), e)
    d = abs(p - q)
    return min(d, 1.0 - d)


def arc_gap(p, q):
    """Forward circular arc from ``p`` to ``q``, i.e. ``(q - p) mod 1``."""
    if _check_same_repr(p, q):
        e = max(p.exp, q.exp)
        return dyadic_make((q.scaled(e) - p.scaled(e)) % (1 << e), e)
    d = q - p
    if d < 0.0:
        d += 1.0
        # q - p + 1 can round up to 1.0 when q - p is a tiny negative number
        if d >= 1.0:
            d = math.nextafter(1.0, 0.0)
    return d


def canonicalize(nums, exps):
    """Vectorised :func:`dyadic_make`; returns ``(nums, exps)`` int64 arrays."""
    nums = np.array(nums, dtype=np.int64, copy=True).reshape(-1)
    exps = np.array(exps, dtype=np.int64, copy=True).reshape(-1)
    if nums.shape != exps.shape:
        raise RangeError("numerator and exponent arrays differ in length")
    if exps.size:
        if exps.min() < 0 or exps.max() > MAX_EXP:
            raise RangeError(f"dyadic exponent outside 0..{MAX_EXP}")
        if nums.min() < 0 or np.any(nums >= (np.int64(1) << exps)):
            raise RangeError("dyadic numerator outside 0..2^exp-1")
    nz = nums != 0
    low = nums[nz] & -nums[nz]
    tz = np.frexp(low.astype(np.float64))[1].astype(np.int64) - 1
    nums[nz] >>= tz
    exps[nz] -= tz
    exps[~nz] = 0
    return nums, exps


def _frozen(a):
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class SequenceRecord:
    """An ordered, homogeneous list of torus points with provenance.

    ``values`` holds canonical numerators (int64) when ``repr == "dyadic"`` and
    binary64 values otherwise; ``exps`` holds the matching exponents for the
    dyadic case.  Points are addressed 1-based through :meth:`point`, matching
    the usual ``x_1, x_2, ...`` indexing; array slicing stays 0-based.
    """

    values: np.ndarray
    exps: np.ndarray | None = None
    kind: str = "custom"
    seed: int | None = None
    config: str | None = None
    meta: dict = field(default_factory=dict)

    @classmethod
    def from_dyadic(cls, nums, exps, **meta) -> "SequenceRecord":
        nums, exps = canonicalize(nums, exps)
        return cls(_frozen(nums), _frozen(exps), **meta)

    @classmethod
    def from_floats(cls, values, **meta) -> "SequenceRecord":
        values = np.array(values, dtype=np.float64, copy=True).reshape(-1)
        if values.size and not np.all((values >= 0.0) & (values < 1.0)):
            # also catches NaN
            raise RangeError("binary64 torus points must lie in [0, 1)")
        return cls(_frozen(values), None, **meta)

    @classmethod
    def from_points(cls, points, **meta) -> "SequenceRecord":
        points = list(points)
        if points and all(isinstance(p, DyadicPoint) for p in points):
            return cls.from_dyadic(
                [p.num for p in points], [p.exp for p in points], **meta
            )
        if all(isinstance(p, float) for p in points):
            return cls.from_floats(points, **meta)
        raise TypeError("a sequence must be all DyadicPoint or all float")

    @property
    def exact(self) -> bool:
        return self.exps is not None

    @property
    def repr(self) -> str:
        return "dyadic" if self.exact else "f64"

    def __len__(self):
        return int(self.values.shape[0])

    def point(self, n: int):
        """The ``n``-th point, 1-based."""
        if not 1 <= n <= len(self):
            raise RangeError(f"index {n} outside 1..{len(self)}")
        if self.exact:
            return DyadicPoint(int(self.values[n - 1]), int(self.exps[n - 1]))
        return float(self.values[n - 1])

    def points(self, N: int | None = None) -> list:
        N = len(self) if N is None else N
        return [self.point(n) for n in range(1, N + 1)]

    def check_prefix(self, N: int):
        if not 1 <= N <= len(self):
            raise RangeError(f"prefix length {N} outside 1..{len(self)}")

    def grid(self, N: int | None = None, exp: int | None = None):
        """Numerators of the first ``N`` dyadic points on a common grid.

        Returns ``(nums, exp)`` where ``exp`` defaults to the largest exponent
        in the prefix.
        """
        if not self.exact:
            raise TypeError("grid() needs a dyadic sequence")
        N = len(self) if N is None else N
        nums = self.values[:N]
        exps = self.exps[:N]
        top = int(exps.max()) if N else 0
        exp = top if exp is None else exp
        if exp < top:
            raise RangeError(f"grid 1/2^{exp} is coarser than the prefix")
        return nums << (exp - exps), exp

    def prefix(self, N: int) -> "SequenceRecord":
        self.check_prefix(N)
        exps = None if self.exps is None else self.exps[:N]
        return SequenceRecord(
            self.values[:N], exps, self.kind, self.seed, self.config, dict(self.meta)
        )

    def __eq__(self, other):
        if not isinstance(other, SequenceRecord):
            return NotImplemented
        if self.exact != other.exact or len(self) != len(other):
            return False
        same = np.array_equal(self.values.view(np.uint64), other.values.view(np.uint64))
        if self.exact:
            same = same and np.array_equal(self.exps, other.exps)
        return bool(same) and (self.kind, self.seed) == (other.kind, other.seed)

    __hash__ = None


# -- text file format --------------------------------------------------------

_HEADER = re.compile(
    r"#ppclab v1 kind=(?P<kind>\S+) n=(?P<n>\d+) repr=(?P<repr>dyadic|f64) "
    r"seed=(?P<seed>\d+|none)"
)
_INT = re.compile(r"0|[1-9]\d*")


def format_sequence(record: SequenceRecord) -> str:
    seed = "none" if record.seed is None else str(record.seed)
    lines = [
        f"#ppclab v1 kind={record.kind} n={len(record)} repr={record.repr} seed={seed}"
    ]
    if record.exact:
        lines += [f"{n} {e}" for n, e in zip(record.values.tolist(), record.exps.tolist())]
    else:
        lines += [f"{v:.17g}" for v in record.values.tolist()]
    return "\n".join(lines) + "\n"


def parse_sequence(text: str) -> SequenceRecord:
    lines = text.splitlines()
    if not lines:
        raise FormatError("empty sequence file")
    m = _HEADER.fullmatch(lines[0].strip())
    if m is None:
        raise FormatError(f"bad header line: {lines[0]!r}")
    n = int(m["n"])
    body = [ln.strip() for ln in lines[1:] if ln.strip()]
    if len(body) != n:
        raise FormatError(f"header says n={n} but found {len(body)} points")
    seed = None if m["seed"] == "none" else int(m["seed"])
    if seed is not None and seed >= 1 << 64:
        raise FormatError("seed does not fit in 64 bits")
    meta = dict(kind=m["kind"], seed=seed)
    if m["repr"] == "f64":
        try:
            values = [float(ln) for ln in body]
        except ValueError as exc:
            raise FormatError(str(exc)) from None
        try:
            return SequenceRecord.from_floats(values, **meta)
        except RangeError as exc:
            raise FormatError(str(exc)) from None
    nums, exps = [], []
    for lineno, ln in enumerate(body, start=2):
        parts = ln.split()
        if len(parts) != 2 or not all(_INT.fullmatch(p) for p in parts):
            raise FormatError(f"line {lineno}: expected '<num> <exp>', got {ln!r}")
        num, exp = int(parts[0]), int(parts[1])
        try:
            DyadicPoint(num, exp)
        except RangeError as exc:
            raise FormatError(f"line {lineno}: {exc}") from None
        nums.append(num)
        exps.append(exp)
    return SequenceRecord.from_dyadic(nums, exps, **meta)


def write_sequence(record: SequenceRecord, path) -> None:
    Path(path).write_text(format_sequence(record))


def read_sequence(path) -> SequenceRecord:
    return parse_sequence(Path(path).read_text())
