from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ppclab.errors import FormatError, RangeError
from ppclab.torus import (
    DyadicPoint,
    SequenceRecord,
    arc_gap,
    canonicalize,
    dyadic_make,
    format_sequence,
    parse_sequence,
    read_sequence,
    torus_distance,
    write_sequence,
)


def P(num, exp):
    return dyadic_make(num, exp)


@pytest.mark.parametrize(
    "num, exp, canon, value",
    [(4, 3, (1, 1), Fraction(1, 2)), (0, 5, (0, 0), 0), (9, 5, (9, 5), Fraction(9, 32))],
)
def test_dyadic_make_reduces(num, exp, canon, value):
    p = dyadic_make(num, exp)
    assert (p.num, p.exp) == canon
    assert p.value == value


@pytest.mark.parametrize("num, exp", [(8, 3), (-1, 3), (1, 63), (0, -1)])
def test_dyadic_make_out_of_range(num, exp):
    with pytest.raises(RangeError):
        dyadic_make(num, exp)


def test_non_canonical_pair_rejected():
    with pytest.raises(RangeError):
        DyadicPoint(2, 2)


def dist(p, q):
    return torus_distance(p, q).value


def test_distance_examples():
    assert dist(P(1, 2), P(1, 2)) == 0
    assert dist(P(0, 0), P(3, 2)) == Fraction(1, 4)
    assert dist(P(3, 3), P(7, 3)) == Fraction(1, 2)


def test_results_keep_the_representation():
    assert torus_distance(P(0, 0), P(3, 2)) == P(1, 2)
    assert isinstance(torus_distance(0.0, 0.75), float)


def test_arc_gap_examples():
    assert arc_gap(P(7, 3), P(1, 3)).value == Fraction(1, 4)
    assert arc_gap(P(0, 0), P(0, 0)).value == 0
    assert arc_gap(P(1, 3), P(7, 3)).value == Fraction(3, 4)


def test_mixed_representations_are_refused():
    with pytest.raises(TypeError):
        torus_distance(P(1, 2), 0.25)
    with pytest.raises(TypeError):
        arc_gap(0.25, P(1, 2))


def test_exhaustive_small_grid():
    # every pair on the 16-point grid, against plain rational arithmetic
    for i in range(16):
        for j in range(16):
            p, q = P(i, 4), P(j, 4)
            d = Fraction((j - i) % 16, 16)
            assert arc_gap(p, q).value == d
            assert dist(p, q) == min(d, 1 - d)
            assert dist(p, q) == dist(q, p)
            if i != j:
                assert arc_gap(p, q).value + arc_gap(q, p).value == 1


exps = st.integers(0, 20)


@given(st.data())
def test_distance_triangle_inequality(data):
    pts = [P(data.draw(st.integers(0, (1 << 20) - 1)), 20) for _ in range(3)]
    a, b, c = pts
    assert dist(a, c) <= dist(a, b) + dist(b, c)
    assert 0 <= dist(a, b) <= Fraction(1, 2)


@given(st.floats(0, 1, exclude_max=True), st.floats(0, 1, exclude_max=True))
def test_float_arc_gap_in_range(x, y):
    g = arc_gap(x, y)
    assert 0 <= g < 1
    assert 0 <= torus_distance(x, y) <= 0.5


@given(st.lists(st.tuples(st.integers(0, 1 << 30), exps), min_size=1, max_size=30))
def test_canonicalize_matches_fractions(pairs):
    nums = np.array([n % (1 << e) for n, e in pairs], dtype=np.int64)
    es = np.array([e for _, e in pairs], dtype=np.int64)
    cn, ce = canonicalize(nums, es)
    for n, e, n2, e2 in zip(nums, es, cn, ce):
        p = dyadic_make(int(n), int(e))
        assert (p.num, p.exp) == (int(n2), int(e2))


def test_record_rejects_out_of_range_floats():
    for bad in ([1.0], [-0.1], [float("nan")]):
        with pytest.raises(RangeError):
            SequenceRecord.from_floats(bad)


def test_points_are_one_based():
    rec = SequenceRecord.from_points([P(1, 1), P(1, 2)])
    assert rec.point(1) == P(1, 1)
    assert rec.point(2) == P(1, 2)
    with pytest.raises(RangeError):
        rec.point(3)


@pytest.mark.parametrize(
    "rec",
    [
        SequenceRecord.from_points([P(0, 0), P(3, 3), P(1, 1), P(5, 62)], kind="test", seed=7),
        SequenceRecord.from_floats([0.1, 0.7, 1 / 3, np.nextafter(1.0, 0.0), 0.0]),
    ],
)
def test_file_round_trip_is_bit_identical(rec, tmp_path):
    path = tmp_path / "seq.txt"
    write_sequence(rec, path)
    back = read_sequence(path)
    assert back == rec
    assert back.values.tobytes() == rec.values.tobytes()


@pytest.mark.parametrize(
    "body",
    [
        "2 2\n",  # not reduced
        "4 2\n",  # numerator out of range
        "1\n",  # missing exponent
    ],
)
def test_parse_rejects_bad_dyadic_lines(body):
    text = "#ppclab v1 kind=test n=1 repr=dyadic seed=none\n" + body
    with pytest.raises(FormatError):
        parse_sequence(text)


def test_parse_rejects_wrong_count():
    text = "#ppclab v1 kind=test n=2 repr=dyadic seed=none\n1 1\n"
    with pytest.raises(FormatError):
        parse_sequence(text)


def test_header_fields():
    rec = SequenceRecord.from_points([P(1, 1)], kind="demo", seed=5)
    assert format_sequence(rec).splitlines()[0] == "#ppclab v1 kind=demo n=1 repr=dyadic seed=5"
