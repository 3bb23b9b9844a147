"""Reduction types and certified local canonical heights.

The archimedean local height is enclosed from an interval orbit: at depth
k, ``lambda(phi^k(a)) / d**k`` is within ``G / d**k`` of the limit for
``G = log(1 + |c|) / (d - 1)``, and within the much tighter telescoped
basin bounds once the iterate has escaped.  Enclosures from successive
depths are intersected, so deeper runs only refine.

At a prime the orbit is followed in truncated p-adic arithmetic: only the
valuation of each iterate matters, and only iterates on the boundary set
need unit digits at all.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

from .dynamics import MapParams, _bits, arch_escape_threshold
from .errors import DomainError, ResourceError
from .intervals import DEFAULT_PREC, CertInterval, log_of
from .numerics import ARCHIMEDEAN, Place, RationalLike, to_rational, val

__all__ = [
    "ReductionType",
    "classify_reduction",
    "Exact",
    "TailBounded",
    "LocalHeight",
    "local_height_nonarch",
    "local_height_arch",
    "local_height",
    "interval_orbit",
    "MAX_PREC",
]

MAX_PREC = 1 << 14
EXACT_BITS = 1024


class ReductionType(enum.Enum):
    GOOD = "Good"
    TYPE_I = "TypeI"
    TYPE_II = "TypeII"

    def __str__(self):
        return self.value


def classify_reduction(c: RationalLike, p: int, d: int) -> ReductionType:
    c = to_rational(c)
    if d < 2:
        raise DomainError("degree must be >= 2")
    if c == 0:
        return ReductionType.GOOD
    v = val(c, p)
    if v >= 0:
        return ReductionType.GOOD
    return ReductionType.TYPE_II if v % d == 0 else ReductionType.TYPE_I


@dataclass(frozen=True)
class Exact:
    kind = "Exact"


@dataclass(frozen=True)
class TailBounded:
    steps: int
    kind = "TailBounded"


Exactness = Union[Exact, TailBounded]


@dataclass(frozen=True)
class LocalHeight:
    place: Place
    value: CertInterval
    exactness: Exactness

    def __post_init__(self):
        if self.value.lo < 0:
            raise ValueError("local canonical heights are non-negative")


# -- non-archimedean ---------------------------------------------------------


def _unit_mod(q: Fraction, p: int, mod: int) -> int:
    """Unit part ``q / p**v_p(q)`` reduced modulo ``mod = p**N``."""
    a, b = q.numerator, q.denominator
    while a % p == 0:
        a //= p
    while b % p == 0:
        b //= p
    return a * pow(b, -1, mod) % mod


def _depth_for(lam_units: int, p: int, d: int, eps: float) -> int:
    """Smallest K with ``lam_units * log p / d**(K+1) <= eps`` (float estimate)."""
    target = lam_units * math.log(p) / eps
    if target <= d:
        return 0
    return max(0, math.ceil(math.log(target) / math.log(d)) - 1)


def _padic_boundary_run(alpha: Fraction, params: MapParams, p: int, K: int, digits: int):
    """Follow the orbit in p-adic precision ``digits`` for at most K steps.

    Returns ``(k, status, lam_units)`` for the first iterate off the
    boundary, or ``(K, "boundary", lam)`` if all of ``phi^0..phi^K`` stay on
    it; None means the digits ran out.
    """
    d = params.d
    w = val(params.c, p)
    lam_c = max(-w, 0)
    c_unit_full = params.c / Fraction(p) ** w
    v = None if alpha == 0 else val(alpha, p)
    n = digits
    mod = p ** n
    u = _unit_mod(alpha, p, mod) if alpha != 0 else 0
    c_unit = _unit_mod(c_unit_full, p, mod)
    for k in range(K + 1):
        lam = 0 if v is None else max(-v, 0)
        if d * lam > lam_c:
            return k, "inside", lam
        if d * lam < lam_c:
            return k, "below", lam
        if k == K:
            return K, "boundary", lam
        # boundary: d*v == w, phi(y) = p**w * (u**d + c_unit)
        s = (pow(u, d, mod) + c_unit) % mod
        if s == 0:
            return None
        t = 0
        while s % p == 0:
            s //= p
            t += 1
        n -= t
        if n < 1:
            return None
        mod = p ** n
        u = s % mod
        v = w + t
    raise AssertionError("unreachable")


def local_height_nonarch(alpha: RationalLike, params: MapParams, p: int, eps: float,
                         prec: int = DEFAULT_PREC, max_digits: int = 1 << 16) -> LocalHeight:
    """Local canonical height at the prime ``p``, exact unless the orbit
    lingers on the boundary set, where a tail bound of width <= eps is used.
    """
    if eps <= 0:
        raise DomainError("eps must be positive")
    a = to_rational(alpha)
    place = Place(p)
    d = params.d
    logp = log_of(p, prec)
    lam_c = 0 if params.c == 0 else max(-val(params.c, p), 0)
    lam_a = 0 if a == 0 else max(-val(a, p), 0)
    if lam_c == 0:
        value = CertInterval.exact(0, prec) if lam_a == 0 else logp * lam_a
        return LocalHeight(place, value, Exact())
    K = _depth_for(lam_c, p, d, eps)
    while (logp * lam_c).scale_down(d, K + 1).certainly_gt(eps):
        K += 1
    digits = max(8, 4 * lam_c + 8)
    while True:
        run = _padic_boundary_run(a, params, p, K, digits)
        if run is not None:
            break
        digits *= 2
        if digits > max_digits:
            raise ResourceError(f"p-adic precision cap reached at p={p}")
    k, status, lam = run
    if status == "inside":
        return LocalHeight(place, (logp * lam).scale_down(d, k), Exact())
    if status == "below":
        # the next iterate has valuation v_p(c) and lies in the basin
        return LocalHeight(place, (logp * lam_c).scale_down(d, k + 1), Exact())
    upper = (logp * lam_c).scale_down(d, K + 1)
    return LocalHeight(place, CertInterval(0, upper.hi, prec), TailBounded(K))


# -- archimedean ---------------------------------------------------------------


def interval_orbit(alpha: Fraction, params: MapParams, prec: int,
                   exact_bits: int = EXACT_BITS) -> Iterator[Union[Fraction, CertInterval]]:
    """Yield ``phi^k(alpha)`` for k = 0, 1, ...: exact while small, then enclosed."""
    y: Union[Fraction, CertInterval] = alpha
    c_iv = CertInterval.exact(params.c, prec)
    d = params.d
    while True:
        yield y
        if isinstance(y, Fraction):
            if _bits(y) <= exact_bits:
                y = y ** d + params.c
                continue
            y = CertInterval.exact(y, prec)
        y = y.pow_int(d) + c_iv


def log_plus(y, prec: int) -> CertInterval:
    if isinstance(y, Fraction):
        return CertInterval.exact(y, prec).log_plus()
    return y.log_plus()


def _lost_precision(y, prec: int) -> bool:
    if isinstance(y, Fraction):
        return False
    w = y.width()
    if w == 0:
        return False
    scale = max(abs(y.lo), abs(y.hi), 1)
    return w > scale * 2 ** (-24)


def _arch_constants(params: MapParams, prec: int):
    """Offsets ``[-G, G]`` (any point) and the basin offsets (escaped points)."""
    d = params.d
    generic = (CertInterval.exact(1 + abs(params.c), prec).log() / (d - 1)).symmetric()
    q = Fraction(1, 2 ** d)
    inner_lo = (log_of(1 - q, prec) / (d - 1)).lo
    inner_hi = (log_of(1 + q, prec) / (d - 1)).hi
    return generic, CertInterval(inner_lo, inner_hi, prec)


def _arch_enclosures(alpha: Fraction, params: MapParams, prec: int):
    """Yield ``(k, enclosure, lost)`` for the depth-k archimedean enclosure."""
    d = params.d
    generic, inner = _arch_constants(params, prec)
    threshold = arch_escape_threshold(params)
    for k, y in enumerate(interval_orbit(alpha, params, prec)):
        lam = log_plus(y, prec)
        if isinstance(y, Fraction):
            inside = abs(y) ** d > threshold
        else:
            inside = abs(y).pow_int(d).certainly_gt(threshold)
        e = lam + (inner if inside else generic)
        yield k, e.clamp_nonneg().scale_down(d, k), _lost_precision(y, prec)


def local_height_arch(alpha: RationalLike, params: MapParams, eps: float,
                      prec: int = DEFAULT_PREC, max_steps: int = 20000) -> LocalHeight:
    """Archimedean local canonical height enclosed to width <= eps."""
    if eps <= 0:
        raise DomainError("eps must be positive")
    a = to_rational(alpha)
    best = None
    while prec <= MAX_PREC:
        enc = None
        for k, e, lost in _arch_enclosures(a, params, prec):
            enc = e if enc is None else enc.intersection(e)
            if enc.width() <= eps:
                return LocalHeight(ARCHIMEDEAN, enc, TailBounded(k))
            if lost or k >= max_steps:
                break
        best = enc
        if k >= max_steps:
            break
        prec *= 2
    raise ResourceError("archimedean local height not certified within budget", best=best)


def local_height(alpha: RationalLike, params: MapParams, place: Place, eps: float,
                 prec: int = DEFAULT_PREC) -> LocalHeight:
    if place.is_archimedean:
        return local_height_arch(alpha, params, eps, prec)
    return local_height_nonarch(alpha, params, place.p, eps, prec)
