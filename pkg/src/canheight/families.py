"""Rational preperiodic points of z^2 + c for integral c.

Two one-parameter families carry all of them (m odd):

* fixed points ``(1 +- m)/2`` when ``c = (1 - m**2)/4``;
* the 2-cycle ``{(m - 1)/2, -(m + 1)/2}`` when ``c = -(m**2 + 3)/4``.

Catalogs are closed under rational preimages, so tails such as
``0 -> -2 -> 2`` at c = -2 are included and flagged as lying outside the
displayed family orbits.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Union

from .dynamics import MapParams, Preperiodic, decide_preperiodic
from .errors import DomainError

__all__ = [
    "CatalogPoint",
    "FixedFamily",
    "TwoCycleFamily",
    "NoneMatch",
    "PreperiodicCatalog",
    "rational_preimages",
    "family_fixed",
    "family_two_cycle",
    "classify_integer_preperiodic",
    "family_tag_for",
]


@dataclass(frozen=True)
class CatalogPoint:
    point: Fraction
    tail: int
    period: int


@dataclass(frozen=True)
class FixedFamily:
    m: int
    kind = "FixedFamily"


@dataclass(frozen=True)
class TwoCycleFamily:
    m: int
    kind = "TwoCycleFamily"


@dataclass(frozen=True)
class NoneMatch:
    kind = "NoneMatch"


FamilyTag = Union[FixedFamily, TwoCycleFamily, NoneMatch]


@dataclass(frozen=True)
class PreperiodicCatalog:
    c: Fraction
    points: tuple[CatalogPoint, ...]
    family_tag: FamilyTag
    # preperiodic points not among the displayed +-(1 +- m)/2
    outside_display: tuple[Fraction, ...] = field(default=())

    @property
    def point_set(self) -> frozenset:
        return frozenset(cp.point for cp in self.points)


def _exact_root(n: int, d: int) -> int | None:
    if n < 0:
        return None
    r = isqrt(n) if d == 2 else round(n ** (1.0 / d)) if n < 1 << 900 else None
    if r is None:
        lo, hi = 0, 1 << (n.bit_length() // d + 1)
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if mid ** d <= n:
                lo = mid
            else:
                hi = mid - 1
        r = lo
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand ** d == n:
            return cand
    return None


def rational_preimages(y: Fraction, params: MapParams) -> list[Fraction]:
    """All z in Q with ``z**d + c == y``, ascending."""
    t = Fraction(y) - params.c
    d = params.d
    if t == 0:
        return [Fraction(0)]
    neg = t < 0
    if neg and d % 2 == 0:
        return []
    a = _exact_root(abs(t.numerator), d)
    b = _exact_root(t.denominator, d)
    if a is None or b is None:
        return []
    r = Fraction(a, b)
    if d % 2 == 0:
        return [-r, r]
    return [-r if neg else r]


def _closure(seeds, params: MapParams) -> set[Fraction]:
    out = set(seeds)
    frontier = list(seeds)
    while frontier:
        z = frontier.pop()
        for pre in rational_preimages(z, params):
            if pre not in out:
                out.add(pre)
                frontier.append(pre)
    return out


def _catalog(c: Fraction, points, tag: FamilyTag, displayed: set[Fraction]) -> PreperiodicCatalog:
    params = MapParams(c, 2)
    rows = []
    for z in sorted(points):
        verdict = decide_preperiodic(z, params)
        if not isinstance(verdict, Preperiodic):
            raise AssertionError(f"{z} failed preperiodic re-check at c={c}: {verdict}")
        rows.append(CatalogPoint(z, verdict.tail, verdict.period))
    outside = tuple(sorted(set(points) - displayed))
    return PreperiodicCatalog(c, tuple(rows), tag, outside)


def _check_m(m: int):
    if isinstance(m, bool) or not isinstance(m, int) or m < 1 or m % 2 == 0:
        raise DomainError(f"family parameter must be an odd integer >= 1, got {m!r}")


def _displayed(m: int) -> set[Fraction]:
    return {Fraction(s * (1 + t * m), 2) for s in (1, -1) for t in (1, -1)}


def family_fixed(m: int) -> PreperiodicCatalog:
    _check_m(m)
    c = Fraction(1 - m * m, 4)
    params = MapParams(c, 2)
    fixed = [Fraction(1 + m, 2), Fraction(1 - m, 2)]
    return _catalog(c, _closure(fixed, params), FixedFamily(m), _displayed(m))


def family_two_cycle(m: int) -> PreperiodicCatalog:
    _check_m(m)
    c = Fraction(-(m * m + 3), 4)
    params = MapParams(c, 2)
    cycle = [Fraction(m - 1, 2), Fraction(-(m + 1), 2)]
    return _catalog(c, _closure(cycle, params), TwoCycleFamily(m), _displayed(m))


def _odd_square_root(n: int) -> int | None:
    if n < 1:
        return None
    r = isqrt(n)
    return r if r * r == n and r % 2 == 1 else None


def family_tag_for(c: int, d: int = 2) -> FamilyTag:
    if d != 2:
        return NoneMatch()
    m = _odd_square_root(1 - 4 * c)
    if m is not None:
        return FixedFamily(m)
    m = _odd_square_root(-3 - 4 * c)
    if m is not None:
        return TwoCycleFamily(m)
    return NoneMatch()


def classify_integer_preperiodic(c: int, d: int = 2) -> PreperiodicCatalog:
    """Every rational preperiodic point of ``z**d + c`` for integral c.

    Such points are integers, and an integer with ``|a| >= |c| + 2`` grows
    strictly in absolute value, so scanning ``|a| <= |c| + 1`` is complete.
    """
    c = Fraction(c)
    if c.denominator != 1:
        raise DomainError("c must be an integer")
    params = MapParams(c, d)
    bound = abs(c.numerator) + 1
    rows = []
    for a in range(-bound, bound + 1):
        verdict = decide_preperiodic(a, params)
        if isinstance(verdict, Preperiodic):
            rows.append(CatalogPoint(Fraction(a), verdict.tail, verdict.period))
    tag = family_tag_for(c.numerator, d)
    displayed = _displayed(tag.m) if not isinstance(tag, NoneMatch) else set()
    outside = tuple(sorted({r.point for r in rows} - displayed))
    return PreperiodicCatalog(c, tuple(rows), tag, outside)
