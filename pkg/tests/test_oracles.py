import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ppclab.construction import explicit_config, halving_config
from ppclab.errors import RangeError
from ppclab.oracles import (
    block_index,
    block_weight,
    expected_F,
    format_rational,
    gamma_k,
    mc_moments,
    variance_F,
    variance_F_exact,
)
from ppclab.pair_correlation import scaling_value

HALVING = halving_config()
A2 = explicit_config(lambda m: 2, lambda m: m - m // 2, 10)


def enumerate_moments(N, s, c, scaling="identity"):
    """Exact mean and variance of F by listing every outcome of X_2..X_N."""
    r = Fraction(s) / scaling_value(scaling, N)
    grids = [range(1 << c.random_exp(block_index(j))) for j in range(2, N + 1)]
    dens = [1 << c.random_exp(block_index(j)) for j in range(2, N + 1)]
    total = math.prod(dens)
    m1 = m2 = Fraction(0)
    for combo in itertools.product(*grids):
        xs = [Fraction(0)] + [Fraction(t, d) for t, d in zip(combo, dens)]
        hits = 0
        for i in range(N):
            for j in range(i + 1, N):
                d = (xs[j] - xs[i]) % 1
                hits += 2 * (min(d, 1 - d) <= r)
        F = Fraction(hits, N)
        m1 += F
        m2 += F * F
    mean = m1 / total
    return mean, m2 / total - mean * mean


def test_block_index_examples():
    assert [block_index(j) for j in (1, 2, 3, 4, 5)] == [0, 1, 2, 2, 3]
    with pytest.raises(RangeError):
        block_index(0)


@given(st.integers(1, 12), st.integers(1, 5000))
def test_block_weight_is_the_plain_sum(k, N):
    assert block_weight(k, N) == sum(j - 1 for j in range(2, N + 1) if block_index(j) == k)


def test_gamma_examples():
    assert gamma_k(3, 2, 1, 8) == Fraction(9, 32)
    assert gamma_k(1, 1, Fraction(1, 2), 2) == Fraction(3, 4)
    assert gamma_k(2, 3, 5, 10) == 1
    assert gamma_k(2, 3, 7, 10) == 1


def test_gamma_exponent_cap():
    with pytest.raises(RangeError):
        gamma_k(40, 30, 1, 8)


@given(st.integers(1, 8), st.integers(1, 8), st.fractions(Fraction(1, 100), 3), st.integers(1, 50))
def test_gamma_matches_grid_enumeration(k, a, s, y):
    K = k + a
    r = Fraction(s) / y
    hits = sum(min(Fraction(t, 1 << K), 1 - Fraction(t, 1 << K)) <= r for t in range(1 << K))
    assert gamma_k(k, a, s, y) == Fraction(hits, 1 << K)


def test_moment_examples():
    c = explicit_config([1], [1])
    assert expected_F(2, 0.5, c) == Fraction(3, 4)
    assert variance_F(2, 0.5, c) == Fraction(3, 16)
    assert expected_F(1, 1, c) == 0
    assert variance_F(1, 1, c) == 0


def test_large_n_expectation():
    assert abs(expected_F(1 << 16, 1, HALVING) - 2) <= Fraction(2, 100)


@pytest.mark.parametrize("c", [HALVING, A2], ids=["halving", "a2"])
@pytest.mark.parametrize("N", [2, 3, 4])
@pytest.mark.parametrize("s", [Fraction(1, 4), Fraction(1, 2), 1, Fraction(3, 2)])
def test_exact_moments_match_enumeration(c, N, s):
    mean, var = enumerate_moments(N, s, c)
    assert expected_F(N, s, c) == mean
    assert variance_F_exact(N, s, c) == var


@pytest.mark.parametrize("scaling", ["plus-sqrt", "minus-sqrt"])
def test_other_scalings_match_enumeration(scaling):
    mean, var = enumerate_moments(4, 1, A2, scaling)
    assert expected_F(4, 1, A2, scaling) == mean
    assert variance_F_exact(4, 1, A2, scaling) == var


def test_pair_variance_sum_misses_cross_grid_covariance():
    # the pair-variance sum is exact for N = 2 and in general is not
    assert variance_F(2, 1, HALVING) == enumerate_moments(2, 1, HALVING)[1]
    diffs = [variance_F(N, s, c) != variance_F_exact(N, s, c)
             for c in (HALVING, A2) for N in (3, 4) for s in (Fraction(1, 2), 1)]
    assert any(diffs)


def test_pair_variance_sum_is_close_for_large_n():
    N = 1 << 10
    approx, exact = variance_F(N, 1, HALVING), variance_F_exact(N, 1, HALVING)
    assert abs(approx / exact - 1) < Fraction(1, 5)


def test_format_rational():
    assert format_rational(Fraction(3, 16)) == "3/2^4"
    assert format_rational(Fraction(2, 3)) == "2/3"
    assert format_rational(Fraction(0)) == "0/2^0"


def test_mc_small_case():
    rep = mc_moments(2, 0.5, HALVING, samples=10_000, seed=7)
    assert abs(rep.mc_mean - 0.75) <= 3 * rep.mc_stderr
    assert rep.to_dict()["mc_samples"] == 10_000


def test_mc_single_point():
    rep = mc_moments(1, 1, HALVING, samples=2, seed=0)
    assert rep.mc_mean == 0 and rep.mc_var == 0


def test_mc_independent_of_workers():
    a = mc_moments(64, 1, HALVING, samples=50, seed=3)
    b = mc_moments(64, 1, HALVING, samples=50, seed=3, workers=4)
    assert a == b


def test_mc_stderr_shrinks_with_samples():
    small = mc_moments(256, 1, HALVING, samples=200, seed=1)
    large = mc_moments(256, 1, HALVING, samples=800, seed=2)
    assert 0.35 < large.mc_stderr / small.mc_stderr < 0.7


def test_mc_needs_two_samples():
    with pytest.raises(RangeError):
        mc_moments(4, 1, HALVING, samples=1)
