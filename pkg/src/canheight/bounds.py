"""Explicit lower bounds for canonical heights and point-by-point verification.

The uniform bound for z^d + c over a field with r archimedean places and s
Type II primes reads

    h_hat(alpha) >= (h(c) - d (d + 2m) log 2) / d**(N + 2)

unless alpha repeats within N steps, with ``m = 2`` for d = 2 (else 1) and
``N = 2 ((d**m + 1)**(r + s + 1) - 1) / d**m``.  For integral c sharper
bounds are available; all bounds are returned as computed, including
non-positive (vacuous) ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .dynamics import MapParams, Preperiodic, Undecided, Wandering, decide_preperiodic
from .errors import DomainError, InconclusiveError
from .height import canonical_height
from .intervals import DEFAULT_PREC, CertInterval, log_of
from .local import ReductionType, classify_reduction
from .numerics import RationalLike, denominator_support, naive_height, to_rational

__all__ = [
    "BoundProfile",
    "theorem2_constants",
    "type_ii_count",
    "theorem2_lower_bound",
    "integer_c_lower_bound",
    "remark_bound_general_d",
    "PreperiodicWithinN",
    "SatisfiesBound",
    "BoundViolation",
    "verify_point",
]

# decide_preperiodic is never asked for more steps than this, however large N is
_ORBIT_CAP = 100_000


@dataclass(frozen=True)
class BoundProfile:
    d: int
    r: int
    s: int
    m: int
    N: int

    @property
    def coefficient(self) -> Fraction:
        return Fraction(1, self.d ** (self.N + 2))

    def offset(self, prec: int = DEFAULT_PREC) -> CertInterval:
        return log_of(2, prec) * (self.d * (self.d + 2 * self.m))

    def bound(self, h_c: CertInterval) -> CertInterval:
        """``(h_c - offset) / d**(N + 2)``."""
        return (h_c - self.offset(h_c.prec)).scale_down(self.d, self.N + 2)


def theorem2_constants(d: int, r: int = 1, s: int = 0) -> BoundProfile:
    for name, v, least in (("d", d, 2), ("r", r, 1), ("s", s, 0)):
        if isinstance(v, bool) or not isinstance(v, int) or v < least:
            raise DomainError(f"{name} must be an integer >= {least}, got {v!r}")
    m = 2 if d == 2 else 1
    dm = d ** m
    num = 2 * ((dm + 1) ** (r + s + 1) - 1)
    N, rem = divmod(num, dm)
    if rem:
        raise AssertionError(f"d**m does not divide 2((d**m+1)**(r+s+1) - 1) for d={d}, r={r}, s={s}")
    return BoundProfile(d, r, s, m, N)


def type_ii_count(c: RationalLike, d: int) -> int:
    c = to_rational(c)
    return sum(1 for p in denominator_support(c) if classify_reduction(c, p, d) is ReductionType.TYPE_II)


def theorem2_lower_bound(c: RationalLike, d: int = 2, r: int = 1, s_override: int | None = None,
                         prec: int = DEFAULT_PREC) -> CertInterval:
    c = to_rational(c)
    s = type_ii_count(c, d) if s_override is None else s_override
    return theorem2_constants(d, r, s).bound(naive_height(c, prec))


def _integer_c(c) -> int:
    c = to_rational(c)
    if c.denominator != 1:
        raise DomainError("c must be an integer")
    if c == 0:
        raise DomainError("c must be nonzero")
    return c.numerator


def integer_c_lower_bound(c: int, d: int = 2, prec: int = DEFAULT_PREC) -> CertInterval:
    """Floor on the height of wandering points of z^2 + c, c a nonzero integer."""
    c = _integer_c(c)
    if d != 2:
        raise DomainError("this bound is for d = 2; use remark_bound_general_d")
    one = CertInterval.exact(1, prec)
    if c < 0:
        return log_of(-c, prec).maximum(one) / 32
    return (log_of(2, prec) / 4) * log_of(c, prec).maximum(one)


def remark_bound_general_d(c: int, d: int, prec: int = DEFAULT_PREC) -> CertInterval:
    """Floor for d >= 3 on points with ``phi(alpha) != phi^2(alpha)``.

    Preperiodic points can violate it (0 at c = -1 is one), so it is only
    checked against certified wandering points.
    """
    c = _integer_c(c)
    if d < 3:
        raise DomainError("this bound needs d >= 3; use integer_c_lower_bound for d = 2")
    lc = log_of(abs(c), prec)
    first = lc * Fraction(d - 2, d * d) + log_of(d, prec) / d - log_of(2, prec) * Fraction(d + 1, d)
    second = (lc + log_of(Fraction(3, 2), prec)) / (d * d)
    return first.maximum(second)


# -- verification -----------------------------------------------------------


@dataclass(frozen=True)
class PreperiodicWithinN:
    i: int
    j: int
    N: int
    kind = "PreperiodicWithinN"


@dataclass(frozen=True)
class SatisfiesBound:
    margin: CertInterval
    height: CertInterval
    bounds: tuple  # (name, CertInterval) pairs
    kind = "SatisfiesBound"


@dataclass(frozen=True)
class BoundViolation:
    bound_name: str
    margin: CertInterval
    height: CertInterval
    bounds: tuple
    kind = "BoundViolation"


Verdict = Union[PreperiodicWithinN, SatisfiesBound, BoundViolation]


def _applicable_bounds(params: MapParams, wandering: bool, prec: int) -> list[tuple[str, CertInterval]]:
    out = [("theorem2", theorem2_lower_bound(params.c, params.d, prec=prec))]
    if wandering and params.c_is_integral and params.c != 0:
        if params.d == 2:
            out.append(("integer_c", integer_c_lower_bound(params.c, 2, prec)))
        else:
            out.append(("remark_general_d", remark_bound_general_d(params.c, params.d, prec)))
    return out


def verify_point(alpha: RationalLike, params: MapParams, eps: float,
                 prec: int = DEFAULT_PREC, retries: int = 3) -> Verdict:
    """Check one point against every lower bound that applies to it.

    A repeat within N steps settles the point.  Otherwise the certified
    height is compared with each bound; when an enclosure straddles a
    bound, eps is shrunk, up to ``retries`` times.
    """
    a = to_rational(alpha)
    prof = theorem2_constants(params.d, 1, type_ii_count(params.c, params.d))
    budget = max(1, min(prof.N - 1, _ORBIT_CAP))
    first = decide_preperiodic(a, params, budget=budget)
    if isinstance(first, Preperiodic) and first.j < prof.N:
        return PreperiodicWithinN(first.i, first.j, prof.N)
    orbit = first if not isinstance(first, Undecided) else decide_preperiodic(a, params)
    bounds = _applicable_bounds(params, isinstance(orbit, Wandering), prec)
    e = eps
    for _ in range(retries + 1):
        h = canonical_height(a, params, e, prec=prec).total
        margins = [(name, h - b) for name, b in bounds]
        for name, mg in margins:
            if mg.certainly_lt(0):
                return BoundViolation(name, mg, h, tuple(bounds))
        if all(mg.certainly_ge(0) for _, mg in margins):
            worst = min((mg for _, mg in margins), key=lambda iv: iv.lo)
            return SatisfiesBound(worst, h, tuple(bounds))
        e /= 100
    raise InconclusiveError(f"height enclosure straddles a bound at eps={e * 100:g}; retry with smaller eps")
