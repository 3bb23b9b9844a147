"""Global canonical height of a rational point, with its place decomposition."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .dynamics import MapParams
from .errors import DomainError, ResourceError
from .intervals import DEFAULT_PREC, CertInterval, log_of
from .local import MAX_PREC, Exact, LocalHeight, TailBounded, interval_orbit, local_height, log_plus
from .numerics import ARCHIMEDEAN, Place, RationalLike, height_places, naive_height, naive_local_height, to_rational, val

__all__ = [
    "ExactSchedule",
    "PlaceSum",
    "HeightReport",
    "m_for_precision",
    "canonical_height",
    "height_decomposition",
]

# fraction of eps given to the tail bound |h_hat - h| <= log|2c|/(d-1); the rest absorbs rounding
_SCHEDULE_SHARE = 0.45


@dataclass(frozen=True)
class ExactSchedule:
    m: int
    kind = "ExactSchedule"


@dataclass(frozen=True)
class PlaceSum:
    kind = "PlaceSum"


Method = Union[ExactSchedule, PlaceSum]


@dataclass(frozen=True)
class HeightReport:
    total: CertInterval
    locals: tuple
    method: Method


def _lemma7_constant(c: Fraction, d: int, prec: int) -> CertInterval:
    return log_of(abs(2 * c), prec) / (d - 1)


def m_for_precision(eps: float, c: RationalLike, d: int) -> int:
    """Smallest m with ``(log|2c| / (d-1)) / d**m <= eps`` for integral c != 0."""
    c = to_rational(c)
    if eps <= 0:
        raise DomainError("eps must be positive")
    if c == 0:
        raise DomainError("the height schedule needs c != 0")
    if c.denominator != 1:
        raise DomainError("the height schedule is only valid for integral c")
    if d < 2:
        raise DomainError("degree must be >= 2")
    const = math.log(abs(2 * c)) / (d - 1)
    m = max(0, math.ceil((math.log(const) - math.log(eps)) / math.log(d)))
    # float rounding at the ceiling boundary: settle on the exact smallest m
    L = _lemma7_constant(c, d, 64)
    while L.scale_down(d, m).certainly_gt(eps):
        m += 1
    while m > 0 and L.scale_down(d, m - 1).certainly_le(eps):
        m -= 1
    return m


def _c_zero_report(a: Fraction, params: MapParams, prec: int) -> HeightReport:
    # z**d multiplies every absolute value's logarithm by d: local heights are naive ones
    places = height_places(a)
    locs = tuple(LocalHeight(v, naive_local_height(a, v, prec), Exact()) for v in places)
    return HeightReport(naive_height(a, prec), locs, ExactSchedule(0))


def _exact_schedule(a: Fraction, params: MapParams, eps: float, prec: int) -> HeightReport:
    d, c = params.d, params.c
    m = m_for_precision(_SCHEDULE_SHARE * eps, c, d)
    best = None
    while prec <= MAX_PREC:
        L = _lemma7_constant(c, d, prec)
        for k, y in enumerate(interval_orbit(a, params, prec)):
            if k == m:
                break
        lam = log_plus(y, prec)
        arch = (lam + L.symmetric()).clamp_nonneg().scale_down(d, m)
        logb = log_of(a.denominator, prec)
        total = logb + arch
        best = total
        if total.width() <= eps:
            locs = [LocalHeight(ARCHIMEDEAN, arch, TailBounded(m))]
            for p in sorted(height_places(a)[1:]):
                locs.append(LocalHeight(p, log_of(p.p, prec) * (-val(a, p.p)), Exact()))
            return HeightReport(total, tuple(locs), ExactSchedule(m))
        prec *= 2
    raise ResourceError("height schedule not certified within precision cap", best=best)


def _place_sum(a: Fraction, params: MapParams, eps: float, prec: int) -> HeightReport:
    places = height_places(params.c, a)
    share = 0.9 * eps / len(places)
    locs = tuple(local_height(a, params, v, share, prec) for v in places)
    total = CertInterval.exact(0, prec)
    for lh in locs:
        total = total + lh.value
    return HeightReport(total, locs, PlaceSum())


def canonical_height(alpha: RationalLike, params: MapParams, eps: float,
                     method: str | None = None, prec: int = DEFAULT_PREC) -> HeightReport:
    """Enclosure of the canonical height of ``alpha`` of width at most ``eps``.

    For integral c the default is the naive-height schedule: iterate m times and
    use ``h(phi^m(a)) / d**m`` with its ``log|2c| / ((d-1) d**m)`` error.
    Otherwise, or with ``method="place-sum"``, local heights at every place
    that can contribute are summed.
    """
    if eps <= 0:
        raise DomainError("eps must be positive")
    if method not in (None, "exact", "place-sum"):
        raise DomainError(f"unknown method {method!r}")
    a = to_rational(alpha)
    if params.c == 0 and method != "place-sum":
        return _c_zero_report(a, params, prec)
    if method == "place-sum" or not params.c_is_integral:
        if method == "exact":
            raise DomainError("the exact schedule needs integral c")
        return _place_sum(a, params, eps, prec)
    return _exact_schedule(a, params, eps, prec)


def height_decomposition(alpha: RationalLike, params: MapParams, eps: float,
                         prec: int = DEFAULT_PREC) -> list[LocalHeight]:
    return list(canonical_height(alpha, params, eps, method="place-sum", prec=prec).locals)
