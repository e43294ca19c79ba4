from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ppclab.errors import RangeError
from ppclab.generators import equispaced, iid_uniform
from ppclab.pair_correlation import (
    PcQuery,
    Predicate,
    Scaling,
    format_curve_csv,
    pair_count_brute,
    pair_count_fast,
    pc_curve,
    pc_statistic,
    scaling_value,
)
from ppclab.torus import SequenceRecord, dyadic_make

BOTH = [pair_count_brute, pair_count_fast]


def naive_count(values, radius, strict):
    # independent oracle: plain Fractions over every ordered pair
    n = 0
    for i, x in enumerate(values):
        for j, y in enumerate(values):
            if i != j:
                d = (y - x) % 1
                d = min(d, 1 - d)
                n += d < radius if strict else d <= radius
    return n


@pytest.mark.parametrize("count", BOTH)
def test_equispaced_eight(count):
    assert count(equispaced(8), 8, Fraction(3, 16), "strict") == 16


@pytest.mark.parametrize("count", BOTH)
def test_single_point_has_no_pairs(count):
    assert count(equispaced(8), 1, Fraction(1, 2), "nonstrict") == 0


@pytest.mark.parametrize("count", BOTH)
def test_half_radius_counts_everything(count):
    rec = iid_uniform(50, 3)
    assert count(rec, 50, 0.5, "nonstrict") == 50 * 49


@pytest.mark.parametrize("count", BOTH)
def test_duplicates_at_zero_radius(count):
    rec = SequenceRecord.from_points([dyadic_make(0, 0), dyadic_make(0, 0), dyadic_make(1, 1)])
    assert count(rec, 3, 0, "nonstrict") == 2
    assert count(rec, 3, 0, "strict") == 0


def test_iid_512_fast_equals_brute():
    rec = iid_uniform(512, 0xC0FFEE)
    for pred in ("strict", "nonstrict"):
        assert pair_count_fast(rec, 512, 2 / 512, pred) == pair_count_brute(rec, 512, 2 / 512, pred)


def test_statistic_examples():
    assert pc_statistic(equispaced(8), PcQuery(8, 1.5)) == 2.0
    assert pc_statistic(equispaced(8), PcQuery(1, 1.5)) == 0
    two = SequenceRecord.from_points([dyadic_make(0, 0), dyadic_make(1, 2)])
    assert pc_statistic(two, PcQuery(2, 1, Scaling.IDENTITY, Predicate.NONSTRICT)) == 1.0


def test_curve_examples():
    rec = equispaced(8)
    assert pc_curve(rec, 8, [0.5, 1.5]) == [(0.5, 0.0), (1.5, 2.0)]
    assert pc_curve(rec, 8, []) == []
    assert format_curve_csv([(0.5, 0.0)]).splitlines() == ["s,F", "0.5,0"]


def test_curve_rejects_unsorted_grid():
    with pytest.raises(RangeError):
        pc_curve(equispaced(8), 8, [1.0, 0.5])


def test_default_predicates():
    assert PcQuery(4, 1).predicate is Predicate.STRICT
    assert PcQuery(4, 1, Scaling.PLUS_SQRT).predicate is Predicate.NONSTRICT


@pytest.mark.parametrize(
    "scaling, N, y", [("identity", 10, 10), ("plus-sqrt", 10, 13), ("minus-sqrt", 10, 7), ("minus-sqrt", 1, 1)]
)
def test_scaling_values(scaling, N, y):
    assert scaling_value(scaling, N) == y


@pytest.mark.parametrize("count", BOTH)
def test_prefix_out_of_range(count):
    with pytest.raises(RangeError):
        count(equispaced(4), 5, 0.1, "strict")


dyadic_points = st.integers(1, 40).flatmap(
    lambda n: st.tuples(
        st.lists(st.integers(0, 255), min_size=n, max_size=n),
        st.integers(0, 256),
        st.sampled_from(["strict", "nonstrict"]),
    )
)


@given(dyadic_points)
def test_counts_match_naive_oracle_dyadic(case):
    nums, rnum, pred = case
    rec = SequenceRecord.from_dyadic(np.array(nums), np.full(len(nums), 8))
    radius = Fraction(rnum, 512)
    expected = naive_count([Fraction(x, 256) for x in nums], radius, pred == "strict")
    assert pair_count_brute(rec, len(nums), radius, pred) == expected
    assert pair_count_fast(rec, len(nums), radius, pred) == expected


@given(
    st.lists(st.floats(0, 1, exclude_max=True), min_size=1, max_size=40),
    st.floats(0, 0.6),
    st.sampled_from(["strict", "nonstrict"]),
)
def test_fast_equals_brute_floats(xs, r, pred):
    rec = SequenceRecord.from_floats(xs)
    assert pair_count_fast(rec, len(xs), r, pred) == pair_count_brute(rec, len(xs), r, pred)


@given(st.integers(2, 200), st.integers(0, 2**32), st.floats(0.01, 3), st.floats(0.01, 3))
def test_count_properties(N, seed, s1, s2):
    rec = iid_uniform(N, seed)
    lo, hi = sorted((s1, s2))
    c_lo = pair_count_fast(rec, N, lo / N, "nonstrict")
    c_hi = pair_count_fast(rec, N, hi / N, "nonstrict")
    assert c_lo <= c_hi
    assert c_lo % 2 == 0
    assert c_hi <= N * (N - 1)
    assert pc_statistic(rec, PcQuery(N, lo)) <= N - 1
