import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from canheight.errors import DomainError
from canheight.numerics import (ARCHIMEDEAN, Place, abs_p, denominator_support, height_places, naive_height,
                                naive_local_height, parse_rational, val)

from oracles import trial_factor

nonzero = st.fractions(min_value=-10 ** 8, max_value=10 ** 8, max_denominator=10 ** 8).filter(lambda q: q != 0)
primes = st.sampled_from([2, 3, 5, 7, 11, 13, 101, 65537])


def close(iv, x, tol=1e-12):
    return iv.lo - tol <= x <= iv.hi + tol


@pytest.mark.parametrize("q,p,v", [(Fraction(1, 3), 3, -1), (12, 2, 2), (Fraction(7, 10), 5, -1)])
def test_valuation_examples(q, p, v):
    assert val(q, p) == v


def test_valuation_of_zero_is_an_error():
    with pytest.raises(DomainError):
        val(0, 5)


def test_naive_local_heights():
    assert close(naive_local_height(Fraction(1, 3), Place(3)), math.log(3))
    assert naive_local_height(5, Place(7)).hi == 0
    assert close(naive_local_height(3, ARCHIMEDEAN), math.log(3))


def test_naive_heights():
    assert naive_height(0).hi == 0 and naive_height(0).lo == 0
    assert close(naive_height(Fraction(-7, 4)), math.log(7))
    assert close(naive_height(Fraction(3, 5)), math.log(5))


def test_denominator_supports():
    assert denominator_support(-2) == set()
    assert denominator_support(Fraction(1, 3)) == {3}
    assert denominator_support(Fraction(5, 12)) == {2, 3}


def test_parse_rational():
    assert parse_rational("-7/4") == Fraction(-7, 4)
    assert parse_rational(" 12 ") == 12
    assert parse_rational("6/4") == Fraction(3, 2)
    for bad in ("1.5", "1/0", "x", ""):
        with pytest.raises(DomainError):
            parse_rational(bad)


def test_place_requires_a_prime():
    with pytest.raises(DomainError):
        Place(15)
    assert str(Place(7)) == "7" and str(ARCHIMEDEAN) == "inf"
    assert height_places(Fraction(1, 6), Fraction(5, 4)) == [ARCHIMEDEAN, Place(2), Place(3)]


@given(nonzero, nonzero, primes)
def test_absolute_value_is_multiplicative(q, r, p):
    assert abs_p(q * r, p) == abs_p(q, p) * abs_p(r, p)


@given(nonzero)
def test_product_formula(q):
    # sum_p v_p(q) log p = log|q|, checked on exponents
    num = trial_factor(q.numerator)
    den = trial_factor(q.denominator)
    for p in set(num) | set(den):
        assert val(q, p) == num.get(p, 0) - den.get(p, 0)
    rebuilt = Fraction(1)
    for p in set(num) | set(den):
        rebuilt *= Fraction(p) ** val(q, p)
    assert rebuilt == abs(q)


@given(st.fractions(min_value=-10 ** 6, max_value=10 ** 6, max_denominator=10 ** 6))
def test_naive_height_is_sum_of_local_heights(q):
    places = [ARCHIMEDEAN] + [Place(p) for p in sorted(trial_factor(q.denominator))]
    total = sum((naive_local_height(q, v) for v in places), naive_local_height(q, ARCHIMEDEAN) * 0)
    h = naive_height(q)
    assert total.intersects(h)
