from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from canheight.dynamics import MapParams, Preperiodic, decide_preperiodic, step
from canheight.errors import DomainError
from canheight.families import (FixedFamily, NoneMatch, TwoCycleFamily, classify_integer_preperiodic, family_fixed,
                                family_tag_for, family_two_cycle, rational_preimages)
from canheight.height import canonical_height

from oracles import naive_preperiodic_integers

F = Fraction


def points(cat):
    return {cp.point: (cp.tail, cp.period) for cp in cat.points}


def test_fixed_family_examples():
    cat = family_fixed(3)
    assert cat.c == -2 and cat.family_tag == FixedFamily(3)
    pts = points(cat)
    assert pts[F(2)] == (0, 1) and pts[F(-1)] == (0, 1)
    assert pts[F(-2)] == (1, 1) and pts[F(1)] == (1, 1)
    assert pts[F(0)] == (2, 1)
    assert cat.outside_display == (F(0),)

    cat = family_fixed(1)
    assert cat.c == 0 and set(points(cat)) == {F(1), F(0), F(-1)}

    cat = family_fixed(5)
    assert cat.c == -6 and points(cat) == {F(3): (0, 1), F(-2): (0, 1), F(-3): (1, 1), F(2): (1, 1)}


def test_two_cycle_family_examples():
    cat = family_two_cycle(1)
    assert cat.c == -1 and points(cat) == {F(0): (0, 2), F(-1): (0, 2), F(1): (1, 2)}
    cat = family_two_cycle(3)
    assert cat.c == -3
    assert points(cat) == {F(1): (0, 2), F(-2): (0, 2), F(2): (1, 2), F(-1): (1, 2)}


@pytest.mark.parametrize("m", [0, 2, -1, 4])
def test_families_reject_even_or_nonpositive_m(m):
    with pytest.raises(DomainError):
        family_fixed(m)
    with pytest.raises(DomainError):
        family_two_cycle(m)


def test_classify_examples():
    assert set(points(classify_integer_preperiodic(-2))) == {F(-2), F(-1), F(0), F(1), F(2)}
    assert classify_integer_preperiodic(1).points == ()
    assert set(points(classify_integer_preperiodic(-1))) == {F(-1), F(0), F(1)}
    assert classify_integer_preperiodic(-5).family_tag == NoneMatch()
    with pytest.raises(DomainError):
        classify_integer_preperiodic(Fraction(1, 2))


def test_family_tags():
    assert family_tag_for(-2) == FixedFamily(3)
    assert family_tag_for(-3) == TwoCycleFamily(3)
    assert family_tag_for(-7) == TwoCycleFamily(5)
    assert family_tag_for(-4) == NoneMatch()
    assert family_tag_for(-2, d=3) == NoneMatch()


def test_rational_preimages():
    p = MapParams(Fraction(-21, 4))
    assert rational_preimages(F(1), p) == [F(-5, 2), F(5, 2)]
    assert rational_preimages(F(-1, 4), p) == []
    assert rational_preimages(F(0), MapParams(-2)) == []
    assert rational_preimages(F(1), MapParams(-7, 3)) == [F(2)]
    assert rational_preimages(F(-7), MapParams(-7, 3)) == [F(0)]


@pytest.mark.parametrize("c", range(-100, 101))
def test_classification_matches_naive_oracle(c):
    cat = classify_integer_preperiodic(c)
    assert points(cat) == {F(a): tp for a, tp in naive_preperiodic_integers(c).items()}


@pytest.mark.parametrize("c", range(-100, 0))
def test_periods_are_at_most_two_for_negative_c(c):
    assert all(cp.period <= 2 for cp in classify_integer_preperiodic(c).points)


@pytest.mark.parametrize("m", range(1, 100, 2))
def test_family_soundness(m):
    for cat in (family_fixed(m), family_two_cycle(m)):
        params = MapParams(cat.c)
        for cp in cat.points:
            v = decide_preperiodic(cp.point, params)
            assert isinstance(v, Preperiodic) and (v.tail, v.period) == (cp.tail, cp.period)
        if cat.c.denominator == 1:
            assert cat.point_set <= classify_integer_preperiodic(cat.c.numerator).point_set


@settings(max_examples=20, deadline=None)
@given(st.integers(-60, -1))
def test_catalog_points_have_zero_height(c):
    params = MapParams(c)
    for cp in classify_integer_preperiodic(c).points:
        assert canonical_height(cp.point, params, 1e-9).total.contains(0)


def test_closure_is_closed():
    for cat in (family_fixed(7), family_two_cycle(7)):
        params = MapParams(cat.c)
        s = cat.point_set
        for z in s:
            assert step(z, params) in s
            assert set(rational_preimages(z, params)) <= s
