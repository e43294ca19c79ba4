"""Exact moments of the pair-correlation statistic of the random component.

The random component is ``X_1 = 0`` followed by independent ``X_j``, each
uniform on the grid ``A_k`` of its block ``k`` (``j`` in ``(2**(k-1), 2**k]``).
For ``i < j`` the difference ``X_j - X_i`` is again uniform on ``A_k``, so each
pair is within distance ``r = s / y_N`` with probability ``gamma_k``, and

    E[F] = (2/N) * sum_{j=2..N} (j - 1) * gamma_{k(j)}

exactly.  :func:`variance_F` adds up the pair variances only, which is the
variance when the pair indicators are uncorrelated.  They are uncorrelated
except for two pairs ``(i, l), (j, l)`` sharing their later index when ``j``
and ``l`` sit on different grids; :func:`variance_F_exact` adds those
covariances back in.

Everything is computed with :class:`fractions.Fraction`; ``s`` and ``y_N`` are
converted exactly, so float arguments are treated as the rationals they are.
"""

from __future__ import annotations

import math
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .construction import ConstructionConfig, random_component
from .errors import RangeError
from .generators import derive_seeds
from .pair_correlation import PcQuery, Predicate, Scaling, pc_statistic, scaling_value
from .torus import MAX_EXP

__all__ = [
    "block_index",
    "block_weight",
    "gamma_k",
    "expected_F",
    "variance_F",
    "variance_F_exact",
    "MomentReport",
    "mc_moments",
    "format_rational",
]


def block_index(j: int) -> int:
    """The ``m`` with ``j`` in ``I_m = (2**(m-1), 2**m]``; ``I_0 = {1}``."""
    if j < 1:
        raise RangeError(f"index must be positive, got {j}")
    return (j - 1).bit_length()


def block_weight(k: int, N: int) -> int:
    """``sum (j - 1)`` over ``j`` in ``I_k`` with ``j <= N``."""
    if k == 0:
        return 0
    lo, hi = (1 << (k - 1)) + 1, min(1 << k, N)
    if hi < lo:
        return 0
    return (lo - 1 + hi - 1) * (hi - lo + 1) // 2


def _radius(s, yN) -> Fraction:
    if not s > 0 or not yN > 0:
        raise RangeError(f"s and y_N must be positive, got s={s}, y_N={yN}")
    return Fraction(s) / Fraction(yN)


def _grid_hits(K: int, r: Fraction) -> int:
    """Points of ``{t / 2**K}`` within torus distance ``r`` of 0, capped at ``2**K``."""
    return min(2 * math.floor(r * (1 << K)) + 1, 1 << K)


def gamma_k(k: int, a_k: int, s, yN) -> Fraction:
    """Probability that a uniform point of ``A_k`` is within ``s / y_N`` of 0.

    ``(2 floor(2**K s / y_N) + 1) / 2**K`` with ``K = k + a_k``, clamped at 1
    for radii that cover the whole torus.
    """
    K = k + a_k
    if k < 1 or a_k < 1:
        raise RangeError(f"need k >= 1 and a_k >= 1, got k={k}, a_k={a_k}")
    if K > MAX_EXP:
        raise RangeError(f"grid exponent k + a_k = {K} exceeds {MAX_EXP}")
    return Fraction(_grid_hits(K, _radius(s, yN)), 1 << K)


def _gammas(N, s, c, scaling):
    yN = scaling_value(scaling, N)
    top = block_index(N)
    return {k: gamma_k(k, c.a(k), s, yN) for k in range(1, top + 1)}


def expected_F(N: int, s, c: ConstructionConfig, scaling=Scaling.IDENTITY) -> Fraction:
    """Exact ``E[F]`` for the random component, non-strict predicate."""
    if N < 1:
        raise RangeError(f"N must be positive, got {N}")
    total = sum(block_weight(k, N) * g for k, g in _gammas(N, s, c, scaling).items())
    return Fraction(2, N) * total


def variance_F(N: int, s, c: ConstructionConfig, scaling=Scaling.IDENTITY) -> Fraction:
    """Sum of the pair variances, ``(4/N**2) sum (j-1) gamma (1 - gamma)``.

    This drops the cross-grid covariances (see :func:`variance_F_exact`); it is
    exact for ``N <= 2`` and within a few percent for large ``N``.
    """
    if N < 1:
        raise RangeError(f"N must be positive, got {N}")
    total = sum(
        block_weight(k, N) * g * (1 - g) for k, g in _gammas(N, s, c, scaling).items()
    )
    return Fraction(4, N * N) * total


def _joint_hits(Kl: int, Kj: int, r: Fraction) -> int:
    # number of (u, v) in A_l x A_j with |u| <= r and |u + v| <= r, for r < 1/2
    p, q = r.numerator, r.denominator
    D = 1 << (Kl - Kj)
    M = 1 << Kj
    t_max = math.floor(r * (1 << Kl))
    base, den = p * M * D, q * D
    total = 0
    for t in range(-t_max, t_max + 1):
        # integers w with -r - u <= w / M <= r - u, u = t / 2**Kl
        total += (base - t * q) // den + (base + t * q) // den + 1
    return total


def variance_F_exact(N: int, s, c: ConstructionConfig, scaling=Scaling.IDENTITY) -> Fraction:
    """Exact ``Var[F]`` including the covariances of pairs sharing a later index.

    For ``i < j < l`` with ``j`` and ``l`` in blocks ``kj < kl`` the events
    ``|X_l - X_i| <= r`` and ``|X_l - X_j| <= r`` are correlated; the
    covariance depends on ``(kj, kl)`` only and is counted exactly by
    enumerating the grid points of ``A_kl`` within ``r`` of 0.  The cost grows
    with ``r * 2**(k + a(k))``, so keep it for moderate grids.
    """
    if N < 1:
        raise RangeError(f"N must be positive, got {N}")
    gam = _gammas(N, s, c, scaling)
    r = _radius(s, scaling_value(scaling, N))
    diag = sum(block_weight(k, N) * g * (1 - g) for k, g in gam.items())
    cross = Fraction(0)
    if r < Fraction(1, 2):
        top = max(gam, default=0)
        for kl in range(2, top + 1):
            # number of later indices l in block kl
            n_l = min(1 << kl, N) - (1 << (kl - 1))
            if n_l <= 0:
                continue
            Kl = c.random_exp(kl)
            for kj in range(1, kl):
                Kj = c.random_exp(kj)
                joint = Fraction(_joint_hits(Kl, Kj, r), 1 << (Kl + Kj))
                cov = joint - gam[kl] ** 2
                if cov:
                    # pairs (i, j) with i < j, j in block kj, all below l
                    cross += n_l * block_weight(kj, N) * cov
    return Fraction(4, N * N) * (diag + 2 * cross)


def format_rational(x: Fraction) -> str:
    """``"p/2^e"`` when the reduced denominator is a power of two, else ``"p/q"``."""
    x = Fraction(x)
    den = x.denominator
    if den & (den - 1) == 0:
        return f"{x.numerator}/2^{den.bit_length() - 1}"
    return f"{x.numerator}/{den}"


@dataclass(frozen=True)
class MomentReport:
    N: int
    s: float | Fraction
    expectation: Fraction
    variance: Fraction
    mc_mean: float | None = None
    mc_var: float | None = None
    mc_samples: int = 0
    mc_stderr: float | None = None
    seed: int | None = None

    def to_dict(self) -> dict:
        out = {
            "N": self.N,
            "s": float(self.s),
            "expectation": {"exact": format_rational(self.expectation), "float": float(self.expectation)},
            "variance": {"exact": format_rational(self.variance), "float": float(self.variance)},
        }
        if self.mc_samples:
            out.update(
                mc_mean=self.mc_mean,
                mc_var=self.mc_var,
                mc_stderr=self.mc_stderr,
                mc_samples=self.mc_samples,
                seed=self.seed,
            )
        return out


def _one_sample(N, query, c, seed):
    return pc_statistic(random_component(N, c, seed), query)


def mc_moments(
    N: int,
    s,
    c: ConstructionConfig,
    scaling=Scaling.IDENTITY,
    samples: int = 1000,
    seed: int = 0,
    workers: int | None = None,
) -> MomentReport:
    """Monte Carlo mean and variance of ``F`` over realisations of the random component.

    Sample ``t`` uses the ``t``-th output of a master stream seeded with
    ``seed``, so results do not depend on ``workers``.
    """
    if samples < 2:
        raise RangeError(f"need at least 2 samples, got {samples}")
    query = PcQuery(N, s, scaling, Predicate.NONSTRICT)
    seeds = derive_seeds(seed, samples)
    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            values = list(pool.map(lambda sd: _one_sample(N, query, c, sd), seeds))
    else:
        values = [_one_sample(N, query, c, sd) for sd in seeds]
    mean = statistics.fmean(values)
    var = statistics.variance(values, mean)
    return MomentReport(
        N=N,
        s=s,
        expectation=expected_F(N, s, c, scaling),
        variance=variance_F(N, s, c, scaling),
        mc_mean=mean,
        mc_var=var,
        mc_samples=samples,
        mc_stderr=math.sqrt(var / samples),
        seed=seed,
    )
