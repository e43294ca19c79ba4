"""Block construction of a dyadic sequence with few distinct gap lengths.

The sequence interleaves two kinds of blocks:

* random blocks ``R_m`` holding ``X_i`` for ``i`` in ``(2**(m-1), 2**m]``,
  each ``X_i`` uniform on the grid ``j / 2**(m + a(m))`` (and ``X_1 = 0``);
* deterministic blocks ``D_m`` holding the new points of the coarser grid
  ``B_m = {j / 2**b(m)}``, i.e. ``C_m = B_m minus B_(m-1)``, in increasing order.

Each ``D_m`` comes right before ``R_m``.  Once the prefix reaches ``D_m`` the
whole grid ``B_(m-1)`` is present and every point lies on ``A_m``, so each gap
is a whole number of ``A_m`` cells no longer than one ``B_(m-1)`` cell.  That
caps the number of distinct gap lengths at ``2**(m + a(m) - b(m-1))``.

With ``a, b`` derived from a target gap-count function ``q`` (see
:func:`derive_ab`) the cap becomes ``2**h(m) <= q(m)``.  The random blocks
carry the pair correlations; the schedule must keep ``m - b(m)`` nonnegative
and non-decreasing, and growing, for them to survive the deterministic
insertions.
"""

from __future__ import annotations

import hashlib
import json
import math
import warnings
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .errors import ConfigError, RangeError
from .generators import RngState
from .torus import MAX_EXP, DyadicPoint, SequenceRecord, dyadic_make

__all__ = [
    "M_MAX",
    "QSpec",
    "ConstructionConfig",
    "Violation",
    "ScheduleWarning",
    "RandomSlot",
    "DeterministicSlot",
    "Block",
    "derive_ab",
    "explicit_config",
    "halving_config",
    "validate_config",
    "block_layout",
    "block_schedule",
    "block_of",
    "deterministic_block",
    "construct_sequence",
    "random_component",
    "gap_bound",
    "grid_inclusion",
    "config_from_json",
    "config_to_json",
]

M_MAX = 60
GROWTH_RULE = "btilde-growth"


class ScheduleWarning(UserWarning):
    """The schedule is valid but ``m - b(m)`` looks stalled."""


class Violation(NamedTuple):
    rule: str
    m: int | None
    message: str


# -- target gap counts -------------------------------------------------------


@dataclass(frozen=True)
class QSpec:
    """Target gap-count function ``q(1..n_max)``, stored as a table."""

    values: tuple

    @classmethod
    def from_function(cls, q: Callable[[int], int], n_max: int) -> "QSpec":
        return cls(tuple(int(q(n)) for n in range(1, n_max + 1)))

    @classmethod
    def builtin(cls, name: str, n_max: int) -> "QSpec":
        """``logn``: ``max(4, floor(log2 n) + 4)``; ``linear``: ``max(4, n)``."""
        if name == "logn":
            return cls.from_function(lambda n: max(4, n.bit_length() - 1 + 4), n_max)
        if name == "linear":
            return cls.from_function(lambda n: max(4, n), n_max)
        raise ValueError(f"unknown builtin q: {name!r}")

    @property
    def n_max(self) -> int:
        return len(self.values)

    def q(self, n: int) -> int:
        if not 1 <= n <= self.n_max:
            raise RangeError(f"q is tabulated on 1..{self.n_max}, asked for {n}")
        return self.values[n - 1]

    def h(self, n: int) -> int:
        """``floor(log2 q(n))``."""
        return self.q(n).bit_length() - 1

    def problems(self) -> list[Violation]:
        out = []
        prev = None
        for n, qn in enumerate(self.values, start=1):
            # no ceiling here: too fast a q shows up as a schedule violation
            if qn < 4:
                out.append(Violation("q-range", n, f"q({n}) = {qn} < 4"))
            if prev is not None and qn < prev:
                out.append(Violation("q-monotone", n, f"q({n}) = {qn} < q({n - 1}) = {prev}"))
            prev = qn
        return out


# -- schedules -----------------------------------------------------------------


@dataclass(frozen=True)
class ConstructionConfig:
    """Schedule tables ``a(1..m_max)`` and ``b(1..m_max)``; ``b(0) = 0``."""

    a_table: tuple
    b_table: tuple
    source: str = "explicit"
    qspec: QSpec | None = None

    @property
    def m_max(self) -> int:
        return len(self.a_table)

    def a(self, m: int) -> int:
        if not 1 <= m <= self.m_max:
            raise RangeError(f"schedule covers m = 1..{self.m_max}, asked for a({m})")
        return self.a_table[m - 1]

    def b(self, m: int) -> int:
        if m == 0:
            return 0
        if not 1 <= m <= self.m_max:
            raise RangeError(f"schedule covers m = 1..{self.m_max}, asked for b({m})")
        return self.b_table[m - 1]

    def btilde(self, m: int) -> int:
        return m - self.b(m)

    def random_exp(self, m: int) -> int:
        """Exponent of the grid ``A_m`` the block-``m`` random points live on."""
        return 0 if m == 0 else m + self.a(m)

    def digest(self) -> str:
        blob = json.dumps({"a": list(self.a_table), "b": list(self.b_table)})
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def explicit_config(a: Callable[[int], int] | Sequence[int], b, m_max: int | None = None):
    """Config from explicit ``a``/``b`` tables or functions of ``m``."""
    if callable(a) or callable(b):
        if m_max is None:
            raise ValueError("m_max is required when a or b is a function")
        a = [a(m) for m in range(1, m_max + 1)] if callable(a) else list(a)[:m_max]
        b = [b(m) for m in range(1, m_max + 1)] if callable(b) else list(b)[:m_max]
    return ConstructionConfig(tuple(int(x) for x in a), tuple(int(x) for x in b))


def halving_config(m_max: int = 40) -> ConstructionConfig:
    """``a(m) = ceil(m/2)``, ``b(m) = m - floor(m/2)``, so ``m - b(m) = floor(m/2)``."""
    return explicit_config(lambda m: (m + 1) // 2, lambda m: m - m // 2, m_max)


def derive_ab(q: QSpec, m_max: int) -> ConstructionConfig:
    """Schedule ``a(m) = ceil(h(m)/2)``, ``b(m) = m + 1 - floor(h(m+1)/2)``.

    ``h = floor(log2 q)``; ``q`` must be tabulated through ``m_max + 1``.  Then
    ``m + a(m) - b(m-1) = h(m)``, so the gap cap is ``2**h(m) <= q(m)``.
    Raises :class:`ConfigError` for an invalid ``q`` or a schedule that breaks
    a structural rule.  Whether ``m - b(m)`` actually grows on the tabulated
    range is left to :func:`validate_config`.
    """
    if q.n_max < m_max + 1:
        raise RangeError(f"q must be tabulated through {m_max + 1}, has {q.n_max}")
    bad = q.problems()
    if bad:
        where = ", ".join(str(v.m) for v in bad)
        raise ConfigError(f"invalid q at n = {where}", bad)
    a = tuple(-(-q.h(m) // 2) for m in range(1, m_max + 1))
    b = tuple(m + 1 - q.h(m + 1) // 2 for m in range(1, m_max + 1))
    config = ConstructionConfig(a, b, source="q", qspec=q)
    hard = [v for v in validate_config(config, warn=False) if v.rule != GROWTH_RULE]
    if hard:
        raise ConfigError("derived schedule is invalid: " + hard[0].message, hard)
    return config


def validate_config(c: ConstructionConfig, warn: bool = True) -> list[Violation]:
    """Every broken schedule rule, as data; an empty list means valid.

    ``m - b(m)`` tending to infinity cannot be seen on a finite table; it is
    checked as "non-decreasing and strictly larger at ``m_max`` than at 1", and
    a :class:`ScheduleWarning` is issued when it is flat over the top half.
    """
    out = []
    M = c.m_max
    if len(c.b_table) != M:
        return [Violation("table-length", None, "a and b tables differ in length")]
    if not 1 <= M <= M_MAX:
        out.append(Violation("m-max", None, f"m_max = {M} outside 1..{M_MAX}"))
        if M < 1:
            return out
    for m in range(1, M + 1):
        a, b, bt = c.a(m), c.b(m), c.btilde(m)
        if a < 1:
            out.append(Violation("a-min", m, f"a({m}) = {a} < 1"))
        if b < 1:
            out.append(Violation("b-min", m, f"b({m}) = {b} < 1"))
        if m + a > MAX_EXP:
            out.append(Violation("exp-cap", m, f"m + a(m) = {m + a} > {MAX_EXP} at m = {m}"))
        if not 0 <= bt <= m:
            out.append(Violation("btilde-range", m, f"m - b(m) = {bt} outside 0..{m} at m = {m}"))
        if m > 1:
            if a < c.a(m - 1):
                out.append(Violation("a-monotone", m, f"a({m}) = {a} < a({m - 1})"))
            if b < c.b(m - 1):
                out.append(Violation("b-monotone", m, f"b({m}) = {b} < b({m - 1})"))
            if bt < c.btilde(m - 1):
                out.append(Violation("btilde-monotone", m, f"m - b(m) decreases at m = {m}"))
    if c.btilde(M) <= c.btilde(1):
        out.append(
            Violation(GROWTH_RULE, M, f"m - b(m) does not grow on 1..{M} (stays at {c.btilde(1)})")
        )
    elif warn and c.btilde(M) == c.btilde((M + 1) // 2):
        warnings.warn(
            f"m - b(m) is constant on {(M + 1) // 2}..{M}; the table may be too short "
            "to show growth",
            ScheduleWarning,
            stacklevel=2,
        )
    return out


# -- layout ----------------------------------------------------------------------


class RandomSlot(NamedTuple):
    i: int  # index of X_i
    m: int  # block, i in I_m


class DeterministicSlot(NamedTuple):
    m: int
    j: int  # 1-based rank within C_m


class Block(NamedTuple):
    kind: str  # "R" or "D"
    m: int
    start: int  # first sequence index, 1-based
    stop: int  # last sequence index, inclusive; stop < start for an empty block


def _blocks(c: ConstructionConfig):
    yield Block("R", 0, 1, 1)
    m = 1
    while True:
        if m > c.m_max:
            raise RangeError(f"schedule exhausted: blocks beyond m_max = {c.m_max} needed")
        half = 1 << (m - 1)
        # R_0 holds one index although B_0 is empty, so D_1 starts at 2
        start = 2 if m == 1 else (1 << c.b(m - 1)) + half + 1
        yield Block("D", m, start, (1 << c.b(m)) + half)
        yield Block("R", m, (1 << c.b(m)) + half + 1, (1 << c.b(m)) + 2 * half)
        m += 1


def block_layout(N: int, c: ConstructionConfig) -> list[Block]:
    """Blocks ``R_0, D_1, R_1, D_2, ...`` intersecting ``1..N``, last one clipped."""
    if N < 1:
        raise RangeError(f"N must be positive, got {N}")
    out = []
    for blk in _blocks(c):
        if blk.start > N:
            break
        out.append(blk._replace(stop=min(blk.stop, N)))
        if blk.stop >= N:
            break
    return out


def block_schedule(N: int, c: ConstructionConfig) -> list:
    """Slot descriptor for each index ``n = 1..N``."""
    out = []
    for blk in block_layout(N, c):
        if blk.kind == "R":
            first = 1 if blk.m == 0 else (1 << (blk.m - 1)) + 1
            out += [RandomSlot(first + k, blk.m) for k in range(blk.stop - blk.start + 1)]
        else:
            out += [DeterministicSlot(blk.m, j) for j in range(1, blk.stop - blk.start + 2)]
    return out


def block_of(n: int, c: ConstructionConfig) -> int:
    """The ``m`` with ``n`` in ``D_m`` or ``R_m`` (0 for ``n = 1``)."""
    return block_layout(n, c)[-1].m


def _fresh_grid(m: int, c: ConstructionConfig) -> np.ndarray:
    """Numerators (over ``2**b(m)``) of ``C_m``, increasing."""
    e = c.b(m)
    j = np.arange(1 << e, dtype=np.int64)
    if m == 1:
        return j
    step = 1 << (e - c.b(m - 1))
    return j[j % step != 0]


def deterministic_block(m: int, c: ConstructionConfig) -> list[DyadicPoint]:
    """``C_m = B_m minus B_(m-1)`` in increasing order, with ``B_0`` empty."""
    if m < 1:
        raise RangeError(f"deterministic blocks start at m = 1, got {m}")
    e = c.b(m)
    return [dyadic_make(j, e) for j in _fresh_grid(m, c).tolist()]


def construct_sequence(
    N: int, c: ConstructionConfig, seed: int, *, require_growth: bool = True
) -> SequenceRecord:
    """The first ``N`` terms of the block sequence for ``seed``.

    ``X_i`` takes the low ``m + a(m)`` bits of the ``i``-th SplitMix64 draw.
    ``X_1`` also consumes a draw before being set to 0, so later ``X_i`` do
    not depend on how the first term is handled.

    ``require_growth=False`` accepts schedules whose ``m - b(m)`` does not
    visibly grow on the tabulated range; the sequence is still well defined
    and the gap cap still holds, only the pair-correlation limit is at stake.
    """
    problems = validate_config(c, warn=False)
    if not require_growth:
        problems = [v for v in problems if v.rule != GROWTH_RULE]
    if problems:
        raise ConfigError("invalid schedule: " + problems[0].message, problems)
    layout = block_layout(N, c)
    n_random = sum(blk.stop - blk.start + 1 for blk in layout if blk.kind == "R")
    draws = RngState(seed).draws(n_random)
    nums = np.empty(N, dtype=np.int64)
    exps = np.empty(N, dtype=np.int64)
    used = 0
    for blk in layout:
        lo, hi = blk.start - 1, blk.stop
        size = hi - lo
        if size <= 0:
            continue
        if blk.kind == "R":
            e = c.random_exp(blk.m)
            mask = np.uint64((1 << e) - 1)
            nums[lo:hi] = (draws[used : used + size] & mask).astype(np.int64)
            exps[lo:hi] = e
            used += size
        else:
            nums[lo:hi] = _fresh_grid(blk.m, c)[:size]
            exps[lo:hi] = c.b(blk.m)
    nums[0] = 0
    return SequenceRecord.from_dyadic(
        nums, exps, kind="construction", seed=int(seed), config=c.digest()
    )


# -- the gap cap and grid inclusions ---------------------------------------------


def gap_bound(n: int, c: ConstructionConfig) -> int:
    """``2**(m + a(m) - b(m-1))`` for the block ``m`` containing ``n``."""
    m = block_of(n, c)
    if m == 0:
        return 1
    return 1 << (m + c.a(m) - c.b(m - 1))


def grid_inclusion(seq: SequenceRecord, n: int, c: ConstructionConfig) -> tuple[bool, bool]:
    """Check ``B_(m-1) <= {Z_1..Z_n} <= A_m`` for the block ``m`` containing ``n``.

    Returns the two inclusions separately, both decided exactly.
    """
    seq.check_prefix(n)
    m = block_of(n, c)
    exps = seq.exps[:n]
    upper = bool(np.all(exps <= c.random_exp(m)))
    if m <= 1:
        return True, upper
    e = c.b(m - 1)
    on_grid = exps <= e
    present = np.unique(seq.values[:n][on_grid] << (e - exps[on_grid]))
    return present.size == 1 << e, upper


# -- JSON config files ---------------------------------------------------------


def config_from_json(obj) -> tuple[ConstructionConfig, int | None]:
    """Parse ``{"source": "q"|"explicit", "q"|"a"+"b": [...], "seed": ...}``.

    A ``q`` table of length ``L`` yields a schedule on ``m = 1..L-1``.
    """
    if isinstance(obj, (str, bytes)):
        obj = json.loads(obj)
    source = obj.get("source")
    seed = obj.get("seed")
    if source == "q":
        q = QSpec(tuple(int(x) for x in obj["q"]))
        return derive_ab(q, q.n_max - 1), seed
    if source == "explicit":
        return explicit_config(obj["a"], obj["b"]), seed
    raise ConfigError(f"config source must be 'q' or 'explicit', got {source!r}")


def config_to_json(c: ConstructionConfig, seed: int | None = None) -> dict:
    if c.source == "q" and c.qspec is not None:
        out = {"source": "q", "q": list(c.qspec.values)}
    else:
        out = {"source": "explicit", "a": list(c.a_table), "b": list(c.b_table)}
    if seed is not None:
        out["seed"] = seed
    return out


def random_component(N: int, c: ConstructionConfig, seed: int) -> SequenceRecord:
    """``X_1..X_N`` alone, laid out by the blocks ``I_m`` with no deterministic part.

    Uses the same draw-to-point rule as :func:`construct_sequence`, so ``X_i``
    here equals ``X_i`` inside the full sequence for the same seed.
    """
    if N < 1:
        raise RangeError(f"N must be positive, got {N}")
    draws = RngState(seed).draws(N)
    i = np.arange(1, N + 1, dtype=np.int64)
    block = np.zeros(N, dtype=np.int64)
    block[1:] = np.ceil(np.log2(i[1:])).astype(np.int64)
    # log2 is exact on powers of two, so the ceiling is exact too
    exps = np.array([c.random_exp(m) for m in range(int(block[-1]) + 1)], dtype=np.int64)[block]
    masks = (np.uint64(1) << exps.astype(np.uint64)) - np.uint64(1)
    nums = (draws & masks).astype(np.int64)
    nums[0] = 0
    return SequenceRecord.from_dyadic(nums, exps, kind="random-component", seed=int(seed), config=c.digest())
