import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from canheight.dynamics import MapParams, Preperiodic, Wandering, decide_preperiodic
from canheight.errors import DomainError
from canheight.families import classify_integer_preperiodic
from canheight.height import canonical_height
from canheight.survey import (_ball_count, enumerate_rationals, family_ratio_scan, figure1_dataset,
                              min_wandering_height, rational_sort_key)

from oracles import hp_log

F = Fraction


def test_enumerate_examples():
    assert list(enumerate_rationals(math.log(2))) == [F(0), F(1), F(-1), F(1, 2), F(-1, 2), F(2), F(-2)]
    assert set(enumerate_rationals(math.log(2))) == {F(0), F(1), F(-1), F(2), F(-2), F(1, 2), F(-1, 2)}
    assert list(enumerate_rationals(0)) == [F(0), F(1), F(-1)]
    with pytest.raises(DomainError):
        list(enumerate_rationals(-1))


@pytest.mark.parametrize("H", [1, 2, 3, 7, 12, 30])
def test_enumeration_is_exact_and_complete(H):
    got = list(enumerate_rationals(math.log(H) + 1e-12))
    want = {F(a, b) for b in range(1, H + 1) for a in range(-H, H + 1)}
    assert len(got) == len(set(got)) == len(want) == _ball_count(H)
    assert set(got) == want
    assert got == sorted(got, key=rational_sort_key)


def test_minimum_at_c_minus_two():
    row = min_wandering_height(-2)
    assert row.argmin == F(1, 2)
    assert set(row.ties) == {F(1, 2), F(-1, 2), F(3, 2), F(-3, 2)}
    assert row.min_height.contains(hp_log(2))
    with mpmath.workdps(40):
        assert row.ratio.contains(mpmath.mpf(1))
    assert row.candidates_examined == _ball_count(row.search_bound)


def test_minimum_at_c_one():
    row = min_wandering_height(1)
    h0 = canonical_height(0, MapParams(1), 1e-9).total
    assert row.argmin == 0 and row.min_height.intersects(h0)
    with mpmath.workdps(40):
        assert row.min_height.lo >= hp_log(2) / 4 - mpmath.mpf(1e-4)
    assert row.preperiodic_excluded == ()


def test_c_minus_six_excludes_family_points():
    row = min_wandering_height(-6)
    assert set(row.preperiodic_excluded) == {F(2), F(-2), F(3), F(-3)}
    assert isinstance(decide_preperiodic(row.argmin, MapParams(-6)), Wandering)


def test_c_minus_one_uses_unit_normalizer():
    row = min_wandering_height(-1)
    assert row.ratio == row.min_height
    assert set(row.preperiodic_excluded) == {F(0), F(1), F(-1)}


def test_survey_rejects_bad_c():
    with pytest.raises(DomainError):
        min_wandering_height(0)
    with pytest.raises(DomainError):
        min_wandering_height(F(1, 2))
    with pytest.raises(DomainError):
        figure1_dataset(-3, 2)


@pytest.mark.parametrize("c", [-2, -3, -5, -7, -12, 2, 3])
def test_pruned_search_agrees_with_unpruned_scan(c):
    # every point of the ball gets a height; nothing is pruned
    row = min_wandering_height(c, eps=1e-6)
    params = MapParams(c)
    best = None
    for q in enumerate_rationals(math.log(row.search_bound) + 1e-12):
        if isinstance(decide_preperiodic(q, params), Preperiodic):
            continue
        h = canonical_height(q, params, 1e-6).total
        best = h if best is None or h.hi < best.hi else best
    assert row.min_height.intersects(best)


@settings(max_examples=15, deadline=None)
@given(st.integers(-40, -2))
def test_rows_respect_floors(c):
    row = min_wandering_height(c)
    with mpmath.workdps(40):
        assert row.ratio.lo >= mpmath.mpf(1) / 32 - mpmath.mpf(1e-4)
    assert set(row.preperiodic_excluded) == classify_integer_preperiodic(c).point_set
    assert isinstance(decide_preperiodic(row.argmin, MapParams(c)), Wandering)


def test_dataset_is_deterministic_across_workers():
    a = figure1_dataset(-8, -1, jobs=1)
    b = figure1_dataset(-8, -1, jobs=2)
    assert [r.c for r in a] == list(range(-8, 0))
    for x, y in zip(a, b):
        assert (x.c, x.argmin, x.ties, x.candidates_examined) == (y.c, y.argmin, y.ties, y.candidates_examined)
        assert x.min_height == y.min_height


def test_family_scan_examples():
    rows = family_ratio_scan(2, 7)
    assert (rows[0].k, rows[0].c) == (2, -5)
    assert (rows[-1].k, rows[-1].c) == (7, -55)
    assert all(r.second_iterate_ok for r in rows)
    for r in rows:
        assert r.height.width() <= 1e-6
    with pytest.raises(DomainError):
        family_ratio_scan(1, 3)


def test_family_ratio_approaches_one_eighth():
    far = family_ratio_scan(1000, 1000)[0]
    assert abs(float(far.ratio.mid()) - 0.125) < 0.02
