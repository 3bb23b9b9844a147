"""Exact orbits of z^d + c over Q, basin membership and preperiodicity."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Union

from .errors import DomainError, ResourceError, UnfactoredCofactorError
from .factor import factorize
from .intervals import CertInterval, DEFAULT_PREC
from .numerics import ARCHIMEDEAN, Place, RationalLike, denominator_support, to_rational, val

__all__ = [
    "MapParams",
    "step",
    "orbit",
    "BasinStatus",
    "basin_test",
    "Preperiodic",
    "Wandering",
    "Undecided",
    "NonIntegral",
    "TypeIObstruction",
    "BasinEscape",
    "OrbitVerdict",
    "decide_preperiodic",
    "default_budget",
    "DEFAULT_MAX_BITS",
]

DEFAULT_MAX_BITS = 1 << 20


@dataclass(frozen=True)
class MapParams:
    """The polynomial ``z**d + c``."""

    c: Fraction
    d: int = 2

    def __post_init__(self):
        object.__setattr__(self, "c", to_rational(self.c))
        if isinstance(self.d, bool) or not isinstance(self.d, int) or self.d < 2:
            raise DomainError(f"degree must be an integer >= 2, got {self.d!r}")

    @property
    def m_exponent(self) -> int:
        return 2 if self.d == 2 else 1

    @property
    def c_is_integral(self) -> bool:
        return self.c.denominator == 1

    def __call__(self, z: RationalLike) -> Fraction:
        return step(z, self)


def step(alpha: RationalLike, params: MapParams) -> Fraction:
    return to_rational(alpha) ** params.d + params.c


def _bits(q: Fraction) -> int:
    return max(q.numerator.bit_length(), q.denominator.bit_length())


def orbit(alpha: RationalLike, params: MapParams, n: int, max_bits: int = DEFAULT_MAX_BITS) -> list[Fraction]:
    """``[alpha, phi(alpha), ..., phi^n(alpha)]`` computed exactly.

    Raises ResourceError (carrying the partial orbit) once an entry needs
    more than ``max_bits`` bits.
    """
    if n < 0:
        raise DomainError("orbit length must be non-negative")
    out = [to_rational(alpha)]
    for _ in range(n):
        nxt = step(out[-1], params)
        if _bits(nxt) > max_bits:
            raise ResourceError(f"orbit entry {len(out)} exceeds {max_bits} bits", best=out)
        out.append(nxt)
    return out


class BasinStatus(enum.Enum):
    INSIDE = "inside"
    BOUNDARY = "boundary"
    BELOW = "below"
    UNKNOWN = "unknown"


def _lam_units(q: Fraction, p: int) -> int:
    """``max(-v_p(q), 0)``, i.e. the p-adic naive local height in units of log p."""
    if q == 0:
        return 0
    return max(-val(q, p), 0)


def arch_escape_threshold(params: MapParams) -> Fraction:
    """``2**d * max(|c|, 1)``: z lies in the archimedean basin iff ``|z|**d`` exceeds it."""
    return Fraction(2) ** params.d * max(abs(params.c), Fraction(1))


def basin_test(alpha, params: MapParams, v: Place, prec: int = DEFAULT_PREC) -> BasinStatus:
    """Locate ``alpha`` relative to the basin at place ``v``.

    At a prime the comparison of ``d * lambda_p(alpha)`` with ``lambda_p(c)``
    is an exact integer comparison.  At the archimedean place a rational is
    compared exactly, giving INSIDE or BELOW; an interval argument gives
    UNKNOWN when it straddles the threshold.
    """
    if not v.is_archimedean:
        a = to_rational(alpha)
        lhs = params.d * _lam_units(a, v.p)
        rhs = _lam_units(params.c, v.p)
        if lhs > rhs:
            return BasinStatus.INSIDE
        return BasinStatus.BOUNDARY if lhs == rhs else BasinStatus.BELOW
    threshold = arch_escape_threshold(params)
    if isinstance(alpha, CertInterval):
        mag = abs(alpha).pow_int(params.d)
        if mag.certainly_gt(threshold):
            return BasinStatus.INSIDE
        if mag.certainly_le(threshold):
            return BasinStatus.BELOW
        return BasinStatus.UNKNOWN
    a = to_rational(alpha)
    return BasinStatus.INSIDE if abs(a) ** params.d > threshold else BasinStatus.BELOW


# -- verdicts ---------------------------------------------------------------


@dataclass(frozen=True)
class NonIntegral:
    """Orbit entry ``step`` fails ``lambda_p = lambda_p(c)/d`` at ``p``.

    ``p`` is prime unless ``certified_prime`` is False, in which case it is
    an unfactored cofactor all of whose prime factors are witnesses.
    """

    p: int
    step: int = 0
    certified_prime: bool = True


@dataclass(frozen=True)
class TypeIObstruction:
    p: int


@dataclass(frozen=True)
class BasinEscape:
    k: int
    place: Place = ARCHIMEDEAN


WanderingCert = Union[NonIntegral, TypeIObstruction, BasinEscape]


@dataclass(frozen=True)
class Preperiodic:
    i: int
    j: int

    @property
    def tail(self) -> int:
        return self.i

    @property
    def period(self) -> int:
        return self.j - self.i

    status = "preperiodic"


@dataclass(frozen=True)
class Wandering:
    certificate: WanderingCert
    status = "wandering"


@dataclass(frozen=True)
class Undecided:
    budget: int
    status = "undecided"


OrbitVerdict = Union[Preperiodic, Wandering, Undecided]


def _type_ii_denominator(params: MapParams) -> tuple[int, list[int]]:
    """``(D, bad primes)`` with ``D**d = den(c)`` once Type I primes are ruled out."""
    bad = sorted(denominator_support(params.c))
    D = 1
    for p in bad:
        D *= p ** (-val(params.c, p) // params.d)
    return D, bad


def default_budget(params: MapParams) -> int:
    """Steps after which an orbit has provably repeated or escaped."""
    c = params.c
    if params.c_is_integral:
        return 4 * abs(c.numerator) + 16
    D = math.exp(math.log(c.denominator) / params.d)
    radius = 2.0 * float(max(abs(c), 1)) ** (1.0 / params.d)
    return int(math.ceil(2 * radius * D)) + 16


def _witness_prime(den: int, D: int, bad: list[int]) -> tuple[int, bool]:
    g = gcd(den, D)
    extra = den // g
    if extra > 1:
        try:
            return min(factorize(extra)), True
        except UnfactoredCofactorError as exc:
            if exc.found:
                return min(exc.found), True
            return exc.cofactor, False
    for p in bad:
        if _vp(den, p) != _vp(D, p):
            return p, True
    raise AssertionError("denominators agree")


def _vp(n: int, p: int) -> int:
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def decide_preperiodic(alpha: RationalLike, params: MapParams, budget: int | None = None,
                       max_bits: int = DEFAULT_MAX_BITS) -> OrbitVerdict:
    """Decide whether ``alpha`` is preperiodic, with a checkable certificate.

    Every orbit entry of a preperiodic point lies on the boundary set at
    every prime, so the denominator of each entry must be exactly D with
    ``D**d = den(c)``; a Type I prime makes this impossible outright.  An
    entry in the archimedean basin escapes monotonically.  Otherwise exact
    values are hashed until one repeats or ``budget`` steps pass.
    """
    a = to_rational(alpha)
    d = params.d
    if budget is None:
        budget = default_budget(params)
    if budget < 1:
        raise DomainError("budget must be at least 1")
    for p in sorted(denominator_support(params.c)):
        if val(params.c, p) % d != 0:
            return Wandering(TypeIObstruction(p))
    D, bad = _type_ii_denominator(params)
    threshold = arch_escape_threshold(params)
    seen: dict[Fraction, int] = {}
    y = a
    for k in range(budget + 1):
        if y.denominator != D:
            p, certified = _witness_prime(y.denominator, D, bad)
            return Wandering(NonIntegral(p, k, certified))
        if y in seen:
            return Preperiodic(seen[y], k)
        seen[y] = k
        if abs(y) ** d > threshold:
            return Wandering(BasinEscape(k, ARCHIMEDEAN))
        if k == budget:
            break
        y = step(y, params)
        if _bits(y) > max_bits:
            return Undecided(k + 1)
    return Undecided(budget)
