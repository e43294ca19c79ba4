"""The acceptance suite, runnable from pytest or ``ppclab verify``.

Each ``criterion_*`` function runs one check at its fixed tolerance and
returns a :class:`CriterionResult`; all seeds are pinned in :data:`SEEDS`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .construction import (
    QSpec,
    construct_sequence,
    derive_ab,
    block_of,
    gap_bound,
    grid_inclusion,
    halving_config,
)
from .gaps import gap_profile
from .generators import GOLDEN, RngState, derive_seeds, equispaced, iid_uniform, kronecker
from .oracles import expected_F, mc_moments, variance_F
from .pair_correlation import PcQuery, pair_count_brute, pair_count_fast, pc_statistic
from .torus import SequenceRecord

SEEDS = {
    "counting": 0x5EED0001,
    "profiles": 0x5EED0002,
    "gap_bound": 0x5EED0003,
    "mc": 0x5EED0004,
    "ppc": 0x5EED0005,
}


class CriterionResult(NamedTuple):
    number: int
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.number:2d} {self.name}: {self.detail}"


# -- 1 ---------------------------------------------------------------------------


def counting_instances(seed: int = SEEDS["counting"], count: int = 200):
    """Random ``(record, N, radius, predicate)`` instances with ``N <= 512``.

    Alternates dyadic and binary64 inputs and the two predicates.  Dyadic
    points use coarse grids and grid-aligned radii so that boundary ties and
    duplicates are common; binary64 points are either i.i.d. or coarse.
    """
    rng = RngState(seed)
    out = []
    for t in range(count):
        N = 1 + rng.next() % 512
        predicate = "strict" if t % 2 else "nonstrict"
        if t % 4 < 2:
            e = 2 + rng.next() % 12
            nums = (RngState(rng.next()).draws(N) % np.uint64(1 << e)).astype(np.int64)
            rec = SequenceRecord.from_dyadic(nums, np.full(N, e))
            radius = Fraction(rng.next() % ((1 << (e - 1)) + 1), 1 << e)
        else:
            if rng.next() % 2:
                rec = iid_uniform(N, rng.next())
            else:
                coarse = (RngState(rng.next()).draws(N) % np.uint64(64)).astype(np.float64) / 64
                rec = SequenceRecord.from_floats(coarse)
            u = rng.next() / 2.0**64
            radius = 0.5 * u**3 if t % 8 != 2 else [0.0, 0.5, 1 / 64][t // 8 % 3]
        out.append((rec, N, radius, predicate))
    return out


def criterion_counting() -> CriterionResult:
    bad = []
    for k, (rec, N, radius, pred) in enumerate(counting_instances()):
        if pair_count_fast(rec, N, radius, pred) != pair_count_brute(rec, N, radius, pred):
            bad.append(k)
    return CriterionResult(
        1, "fast pair count equals brute force", not bad,
        f"200 instances, mismatches at {bad}" if bad else "200/200 instances agree",
    )


# -- 2 ---------------------------------------------------------------------------


def _profile_sources():
    seed = SEEDS["profiles"]
    return [
        ("equispaced-dyadic", equispaced(1 << 14)),
        ("equispaced-f64", equispaced(12_000)),
        ("kronecker", kronecker(GOLDEN, 1 << 14)),
        ("iid", iid_uniform(1 << 14, seed)),
        ("construction-halving", construct_sequence(1 << 14, halving_config(), seed)),
        (
            "construction-logn",
            construct_sequence(
                1 << 14, derive_ab(QSpec.builtin("logn", 20), 16), seed, require_growth=False
            ),
        ),
    ]


def criterion_gap_identities() -> CriterionResult:
    failures = []
    rows = 0
    for label, rec in _profile_sources():
        n = len(rec)
        checkpoints = sorted({1, 2, 3, 5, 17, 100, 999, n} | {1 << k for k in range(15) if 1 << k <= n})
        for N in checkpoints:
            p = gap_profile(rec, N)
            rows += 1
            total = p.total_length()
            ok_len = total == 1 if rec.exact else abs(total - 1.0) <= 1e-9
            if sum(p.multiplicities) != N or not ok_len or p.g * p.max_phi < N:
                failures.append(f"{label}@{N}")
    return CriterionResult(
        2, "gap identities and g >= N/max phi", not failures,
        f"{rows} profiles checked" + (f"; failures {failures}" if failures else ""),
    )


# -- 3 ---------------------------------------------------------------------------


def criterion_three_gap() -> CriterionResult:
    rec = kronecker(GOLDEN, 4096)
    worst_g, worst_ratio = 0, 1.0
    for N in range(2, 4097):
        p = gap_profile(rec, N, 1e-12)
        worst_g = max(worst_g, p.g)
        worst_ratio = min(worst_ratio, p.max_ratio)
    ok = worst_g <= 3 and worst_ratio >= 1 / 3
    return CriterionResult(
        3, "three gaps for the golden Kronecker sequence", ok,
        f"N = 2..4096: max g = {worst_g}, min max_ratio = {worst_ratio:.4f}",
    )


# -- 4, 5 ------------------------------------------------------------------------


def _gap_bound_runs():
    n_top = 1 << 15
    q = QSpec.builtin("logn", n_top)
    c = derive_ab(q, 16)
    seeds = derive_seeds(SEEDS["gap_bound"], 20)
    checkpoints = [1 << k for k in range(4, 16)]
    return q, c, seeds, checkpoints, n_top


def criterion_gap_bound() -> CriterionResult:
    q, c, seeds, checkpoints, n_top = _gap_bound_runs()
    bad = []
    worst = 0.0
    for seed in seeds:
        z = construct_sequence(n_top, c, seed, require_growth=False)
        for n in checkpoints:
            m = block_of(n, c)
            cap = gap_bound(n, c)
            g = gap_profile(z, n).g
            worst = max(worst, g / cap)
            if cap != 1 << q.h(m) or g > cap or g > q.q(n):
                bad.append((seed, n, g, cap))
    return CriterionResult(
        4, "g(n) <= 2^h(m) <= q(n) on the derived schedule", not bad,
        f"20 seeds x {len(checkpoints)} checkpoints, max g/cap = {worst:.3f}"
        + (f"; violations {bad[:5]}" if bad else ""),
    )


def criterion_grid_inclusion() -> CriterionResult:
    _, c, seeds, checkpoints, n_top = _gap_bound_runs()
    bad = []
    for seed in seeds:
        z = construct_sequence(n_top, c, seed, require_growth=False)
        for n in checkpoints:
            lower, upper = grid_inclusion(z, n, c)
            if not (lower and upper):
                bad.append((seed, n, lower, upper))
    return CriterionResult(
        5, "B_(m-1) <= prefix <= A_m", not bad,
        f"20 seeds x {len(checkpoints)} checkpoints" + (f"; failures {bad[:5]}" if bad else ""),
    )


# -- 6, 7, 8 ---------------------------------------------------------------------


def criterion_expectation() -> CriterionResult:
    c = halving_config()
    parts, ok = [], True
    for s in (0.5, 1, 2):
        rel_hi = abs(expected_F(1 << 16, s, c) / (2 * Fraction(s)) - 1)
        rel_lo = abs(expected_F(1 << 8, s, c) / (2 * Fraction(s)) - 1)
        ok &= rel_hi <= Fraction(5, 100) and rel_hi < rel_lo
        parts.append(f"s={s}: {float(rel_lo):.4f} -> {float(rel_hi):.4f}")
    return CriterionResult(6, "E[F]/(2s) -> 1", ok, "rel. error 2^8 -> 2^16: " + ", ".join(parts))


def criterion_variance() -> CriterionResult:
    c = halving_config()
    scaled = {N: N * variance_F(N, 1, c) for N in (1 << 8, 1 << 10, 1 << 12, 1 << 14)}
    base = scaled[1 << 8]
    ok = all(v <= 4 * base for v in scaled.values())
    detail = ", ".join(f"N=2^{N.bit_length() - 1}: {float(v):.4f}" for N, v in scaled.items())
    return CriterionResult(7, "N Var[F] bounded", ok, detail)


def criterion_monte_carlo(seed: int = SEEDS["mc"]):
    rep = mc_moments(1 << 10, 1, halving_config(), samples=500, seed=seed)
    dm = abs(rep.mc_mean - float(rep.expectation))
    dv = abs(rep.mc_var - float(rep.variance))
    ok = dm <= 3 * rep.mc_stderr and dv <= 0.5 * float(rep.variance)
    return CriterionResult(
        8, "Monte Carlo agrees with the exact moments", ok,
        f"mean {rep.mc_mean:.5f} vs {float(rep.expectation):.5f} ({dm / rep.mc_stderr:.2f} s.e.), "
        f"var {rep.mc_var:.3e} vs {float(rep.variance):.3e} (rel {dv / float(rep.variance):.3f})",
    ), rep


# -- 9 ---------------------------------------------------------------------------


def criterion_ppc(seed: int = SEEDS["ppc"]):
    N = 1 << 16
    z = construct_sequence(N, halving_config(), seed)
    ok = True
    parts = []
    values = []
    for s in (0.5, 1, 2):
        F = pc_statistic(z, PcQuery(N, s))
        values.append(F)
        ok &= abs(F - 2 * s) <= 0.1 * max(1, 2 * s)
        parts.append(f"F({s}) = {F:.4f}")
    r_lo = gap_profile(z, 1 << 8).max_ratio
    r_hi = gap_profile(z, N).max_ratio
    ok &= r_hi < r_lo
    parts.append(f"max_ratio {r_lo:.4f} -> {r_hi:.5f}")
    return CriterionResult(9, "PPC of one constructed sequence", ok, ", ".join(parts)), (z, values)


# -- 10 --------------------------------------------------------------------------


def criterion_determinism() -> CriterionResult:
    checks = {}
    _, (z1, f1) = criterion_ppc()
    _, (z2, f2) = criterion_ppc()
    checks["construction"] = z1 == z2 and f1 == f2
    _, r1 = criterion_monte_carlo()
    _, r2 = criterion_monte_carlo()
    checks["monte-carlo"] = r1 == r2
    a = counting_instances()
    b = counting_instances()
    checks["counting-instances"] = all(
        x[0] == y[0] and x[1:] == y[1:] for x, y in zip(a, b)
    )
    seed = SEEDS["profiles"]
    checks["iid"] = iid_uniform(1 << 14, seed) == iid_uniform(1 << 14, seed)
    _, c, seeds, _, n_top = _gap_bound_runs()
    checks["derived-schedule"] = construct_sequence(
        n_top, c, seeds[0], require_growth=False
    ) == construct_sequence(n_top, c, seeds[0], require_growth=False)
    ok = all(checks.values())
    return CriterionResult(
        10, "same seed, bit-identical output", ok,
        ", ".join(f"{k}={'same' if v else 'DIFFERENT'}" for k, v in checks.items()),
    )


def run_all(echo=print) -> list[CriterionResult]:
    results = [
        criterion_counting(),
        criterion_gap_identities(),
        criterion_three_gap(),
        criterion_gap_bound(),
        criterion_grid_inclusion(),
        criterion_expectation(),
        criterion_variance(),
        criterion_monte_carlo()[0],
        criterion_ppc()[0],
        criterion_determinism(),
    ]
    if echo:
        for r in results:
            echo(r.line())
    return results
