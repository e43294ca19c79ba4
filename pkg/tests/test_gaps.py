from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ppclab.errors import RangeError, UsageError
from ppclab.gaps import GapRow, gap_profile, gap_series
from ppclab.generators import GOLDEN, equispaced, iid_uniform, kronecker
from ppclab.torus import SequenceRecord, dyadic_make


def test_two_points():
    rec = SequenceRecord.from_points([dyadic_make(0, 0), dyadic_make(1, 1)])
    p = gap_profile(rec, 2)
    assert p.lengths == (Fraction(1, 2),)
    assert p.multiplicities == (2,)
    assert p.g == 1


def test_equispaced_four():
    p = gap_profile(equispaced(4), 4)
    assert p.lengths == (Fraction(1, 4),)
    assert p.multiplicities == (4,)


def test_kronecker_five_by_hand():
    # sorted: 0.0902, 0.2361, 0.4721, 0.6180, 0.8541
    p = gap_profile(kronecker(GOLDEN, 5), 5, 1e-12)
    assert p.g == 2
    assert p.lengths == pytest.approx([0.1459, 0.2361], abs=1e-4)
    assert p.multiplicities == (2, 3)
    assert p.to_dict()["multiplicities"] == [2, 3]


def test_series_rows():
    # each row from the equispaced set of its own size; a prefix of j/8 is not equispaced
    rows = gap_series(equispaced(4), [4]) + gap_series(equispaced(8), [8])
    assert rows == [GapRow(4, 1, 4, 1.0), GapRow(8, 1, 8, 1.0)]
    assert gap_series(equispaced(8), [4, 8])[0] == GapRow(4, 2, 3, 0.75)


def test_series_needs_increasing_checkpoints():
    with pytest.raises(UsageError):
        gap_series(equispaced(8), [8, 4])


def test_tolerance_on_exact_input_is_a_usage_error():
    with pytest.raises(UsageError):
        gap_profile(equispaced(8), 8, 1e-9)


def test_single_point_is_one_full_gap():
    p = gap_profile(iid_uniform(3, 1), 1)
    assert p.lengths == (1.0,)
    assert p.multiplicities == (1,)


def test_coincident_points():
    rec = SequenceRecord.from_points([dyadic_make(1, 2)] * 3)
    p = gap_profile(rec, 3)
    assert dict(zip(p.lengths, p.multiplicities)) == {0: 2, 1: 1}
    assert p.total_length() == 1


@pytest.mark.parametrize("n", [3, 7, 100, 1000])
def test_equispaced_any_n_has_one_gap(n):
    p = gap_profile(equispaced(n), n, 1e-12)
    assert p.g == 1 and p.max_phi == n


@given(st.lists(st.integers(0, 63), min_size=1, max_size=50), st.randoms())
def test_identities_and_permutation_invariance(nums, rnd):
    rec = SequenceRecord.from_dyadic(np.array(nums), np.full(len(nums), 6))
    p = gap_profile(rec, len(nums))
    assert sum(p.multiplicities) == len(nums)
    assert p.total_length() == 1
    assert p.g * p.max_phi >= len(nums)
    shuffled = list(nums)
    rnd.shuffle(shuffled)
    q = gap_profile(SequenceRecord.from_dyadic(np.array(shuffled), np.full(len(nums), 6)), len(nums))
    assert q == p


@given(st.integers(1, 300), st.integers(0, 2**40))
def test_float_identities(n, seed):
    p = gap_profile(iid_uniform(n, seed), n)
    assert sum(p.multiplicities) == n
    assert p.total_length() == pytest.approx(1.0, abs=1e-9)


@given(st.integers(2, 2000))
def test_three_gaps_at_any_checkpoint(N):
    p = gap_profile(kronecker(GOLDEN, N), N, 1e-12)
    assert p.g <= 3 and p.max_ratio >= 1 / 3
