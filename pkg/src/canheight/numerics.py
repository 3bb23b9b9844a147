"""Rationals, places of Q, valuations and naive (Weil) heights.

Rationals are ``fractions.Fraction`` values, which already keep lowest terms
with a positive denominator and represent zero as 0/1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import DomainError
from .factor import factorize, is_prime
from .intervals import DEFAULT_PREC, CertInterval, log_of

__all__ = [
    "Rational",
    "to_rational",
    "parse_rational",
    "Place",
    "ARCHIMEDEAN",
    "val",
    "abs_p",
    "naive_local_height",
    "naive_height",
    "denominator_support",
    "height_places",
]

Rational = Fraction
RationalLike = Union[Fraction, int, str]


def to_rational(x: RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"expected a rational, got {type(x).__name__}")


def parse_rational(text: str) -> Fraction:
    """Parse ``a/b`` or an integer literal.  Floats are rejected."""
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        a = int(num)
        b = int(den) if sep else 1
    except ValueError:
        raise DomainError(f"not a rational literal: {text!r}") from None
    if b == 0:
        raise DomainError(f"zero denominator in {text!r}")
    return Fraction(a, b)


@dataclass(frozen=True, order=True)
class Place:
    """A place of Q: ``p is None`` for the archimedean one, else a prime."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None:
            if isinstance(self.p, bool) or not isinstance(self.p, int):
                raise TypeError("prime must be an int")
            if not is_prime(self.p):
                raise DomainError(f"{self.p} is not prime")

    @classmethod
    def finite(cls, p: int) -> "Place":
        return cls(p)

    @property
    def is_archimedean(self) -> bool:
        return self.p is None

    def __str__(self):
        return "inf" if self.p is None else str(self.p)

    def sort_key(self):
        return (0, 0) if self.p is None else (1, self.p)


ARCHIMEDEAN = Place()


def _vp_int(n: int, p: int) -> int:
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def val(q: RationalLike, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    q = to_rational(q)
    if q == 0:
        raise DomainError("valuation of zero is +infinity")
    return _vp_int(q.numerator, p) - _vp_int(q.denominator, p)


def abs_p(q: RationalLike, p: int) -> Fraction:
    """Normalized p-adic absolute value ``p**(-v_p(q))`` (0 at zero)."""
    q = to_rational(q)
    if q == 0:
        return Fraction(0)
    return Fraction(p) ** (-val(q, p))


def naive_local_height(q: RationalLike, v: Place, prec: int = DEFAULT_PREC) -> CertInterval:
    """Enclosure of ``max(log|q|_v, 0)``."""
    q = to_rational(q)
    if v.is_archimedean:
        return CertInterval.exact(q, prec).log_plus()
    if q == 0:
        return CertInterval.exact(0, prec)
    k = max(-val(q, v.p), 0)
    if k == 0:
        return CertInterval.exact(0, prec)
    return log_of(v.p, prec) * k


def naive_height(q: RationalLike, prec: int = DEFAULT_PREC) -> CertInterval:
    """Enclosure of ``log max(|a|, b)`` for ``q = a/b`` in lowest terms."""
    q = to_rational(q)
    top = max(abs(q.numerator), q.denominator)
    return log_of(top, prec)


def denominator_support(c: RationalLike) -> set[int]:
    """Primes p with ``v_p(c) < 0``: the primes of bad reduction of z^d + c."""
    c = to_rational(c)
    if c.denominator == 1:
        return set()
    return set(factorize(c.denominator))


def height_places(*values: RationalLike) -> list[Place]:
    """The archimedean place followed by every prime dividing a denominator."""
    primes: set[int] = set()
    for x in values:
        primes |= denominator_support(x)
    return [ARCHIMEDEAN] + [Place(p) for p in sorted(primes)]
