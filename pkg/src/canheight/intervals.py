"""Closed real intervals with outward-rounded multiprecision endpoints.

Endpoints are raw ``mpmath.libmp`` floats.  Every operation rounds the lower
endpoint toward -inf and the upper toward +inf, so the result encloses the
exact real value of the operation applied to any points of the operands.
Transcendental functions are additionally widened by one ulp, so the
enclosure does not depend on mpmath rounding them correctly.
"""

from __future__ import annotations

from decimal import Decimal
from fractions import Fraction
from numbers import Rational as _RationalABC

import mpmath
from mpmath import libmp as L

__all__ = ["CertInterval", "DEFAULT_PREC", "coerce", "log_of"]

DEFAULT_PREC = 128

_F, _C = L.round_floor, L.round_ceiling
_ZERO = L.fzero
_ONE = L.fone


def _raw_from_number(x, prec, rnd):
    if isinstance(x, bool):
        x = int(x)
    if isinstance(x, int):
        return L.from_int(x, prec, rnd)
    if isinstance(x, _RationalABC):
        return L.from_rational(int(x.numerator), int(x.denominator), prec, rnd)
    if isinstance(x, float):
        return L.from_float(x)
    if isinstance(x, mpmath.mpf):
        return L.mpf_pos(x._mpf_, prec, rnd)
    if isinstance(x, tuple):
        return L.mpf_pos(x, prec, rnd)
    raise TypeError(f"cannot enclose {type(x).__name__}")


def _down(x, prec):
    """One ulp below a computed transcendental value."""
    if x == _ZERO:
        return x
    return L.mpf_perturb(x, 1, prec, _F)


def _up(x, prec):
    if x == _ZERO:
        return x
    return L.mpf_perturb(x, 0, prec, _C)


def _min(a, b):
    return a if L.mpf_le(a, b) else b


def _max(a, b):
    return a if L.mpf_ge(a, b) else b


def _to_fraction(raw) -> Fraction:
    p, q = L.to_rational(raw)
    return Fraction(int(p), int(q))


def _directed_decimal(raw, digits: int, upward: bool) -> str:
    """Decimal string with ``digits`` significant digits, rounded outward."""
    if raw == _ZERO:
        return "0"
    x = _to_fraction(raw)
    sign = -1 if x < 0 else 1
    ax = abs(x)
    # exponent e with 10**e <= ax < 10**(e+1)
    e = len(str(ax.numerator // ax.denominator)) - 1 if ax >= 1 else -1
    if ax < 1:
        while Fraction(10) ** e > ax:
            e -= 1
    shift = digits - 1 - e
    scaled = ax * Fraction(10) ** shift
    floor_n = scaled.numerator // scaled.denominator
    exact = floor_n == scaled
    # round away from zero iff that is the requested outward direction
    away = (sign > 0) == upward
    n = floor_n + (0 if exact or not away else 1)
    d = Decimal(sign * n).scaleb(-shift)
    return format(d.normalize(), "g") if d != 0 else "0"


class CertInterval:
    """Immutable enclosure ``[lo, hi]`` of an unknown real number."""

    __slots__ = ("_lo", "_hi", "prec")

    def __init__(self, lo, hi=None, prec: int = DEFAULT_PREC):
        if hi is None:
            hi = lo
        lo_raw = _raw_from_number(lo, prec, _F)
        hi_raw = _raw_from_number(hi, prec, _C)
        if L.mpf_gt(lo_raw, hi_raw):
            raise ValueError("interval lower endpoint exceeds upper endpoint")
        object.__setattr__(self, "_lo", lo_raw)
        object.__setattr__(self, "_hi", hi_raw)
        object.__setattr__(self, "prec", int(prec))

    def __setattr__(self, name, value):
        raise AttributeError("CertInterval is immutable")

    def __reduce__(self):
        return (_rebuild, (self._lo, self._hi, self.prec))

    @classmethod
    def _raw(cls, lo, hi, prec):
        obj = object.__new__(cls)
        object.__setattr__(obj, "_lo", lo)
        object.__setattr__(obj, "_hi", hi)
        object.__setattr__(obj, "prec", prec)
        return obj

    @classmethod
    def exact(cls, x, prec: int = DEFAULT_PREC) -> "CertInterval":
        """Tightest enclosure of an exact rational (or binary float)."""
        return cls(x, x, prec)

    @classmethod
    def hull_of(cls, items) -> "CertInterval":
        items = list(items)
        out = items[0]
        for it in items[1:]:
            out = out.hull(it)
        return out

    # -- endpoint access -------------------------------------------------

    # make_mpf keeps the raw value; mpf(raw) would round to the global precision

    @property
    def lo(self) -> mpmath.mpf:
        return mpmath.mp.make_mpf(self._lo)

    @property
    def hi(self) -> mpmath.mpf:
        return mpmath.mp.make_mpf(self._hi)

    def lo_fraction(self) -> Fraction:
        return _to_fraction(self._lo)

    def hi_fraction(self) -> Fraction:
        return _to_fraction(self._hi)

    def width(self) -> mpmath.mpf:
        return mpmath.mp.make_mpf(L.mpf_sub(self._hi, self._lo, 64, _C))

    def mid(self) -> mpmath.mpf:
        s = L.mpf_add(self._lo, self._hi, self.prec + 2, L.round_nearest)
        return mpmath.mpf(L.mpf_shift(s, -1))

    def __float__(self) -> float:
        return float(self.mid())

    def endpoints_str(self, digits: int = 17) -> tuple[str, str]:
        """Outward-rounded decimal strings for the two endpoints."""
        return (_directed_decimal(self._lo, digits, upward=False),
                _directed_decimal(self._hi, digits, upward=True))

    def with_prec(self, prec: int) -> "CertInterval":
        return CertInterval._raw(L.mpf_pos(self._lo, prec, _F), L.mpf_pos(self._hi, prec, _C), prec)

    # -- set relations ---------------------------------------------------

    def contains(self, x) -> bool:
        if isinstance(x, CertInterval):
            return L.mpf_le(self._lo, x._lo) and L.mpf_ge(self._hi, x._hi)
        if isinstance(x, _RationalABC) and not isinstance(x, int):
            return self.lo_fraction() <= Fraction(x) <= self.hi_fraction()
        if isinstance(x, mpmath.mpf):
            raw = x._mpf_
        elif isinstance(x, float):
            raw = L.from_float(x)
        else:
            raw = L.from_int(int(x))
        return L.mpf_le(self._lo, raw) and L.mpf_le(raw, self._hi)

    def __contains__(self, x) -> bool:
        return self.contains(x)

    def intersects(self, other: "CertInterval") -> bool:
        return L.mpf_le(self._lo, other._hi) and L.mpf_le(other._lo, self._hi)

    def intersection(self, other: "CertInterval") -> "CertInterval":
        if not self.intersects(other):
            raise ValueError("disjoint enclosures")
        return CertInterval._raw(_max(self._lo, other._lo), _min(self._hi, other._hi),
                                 max(self.prec, other.prec))

    def hull(self, other: "CertInterval") -> "CertInterval":
        return CertInterval._raw(_min(self._lo, other._lo), _max(self._hi, other._hi),
                                 max(self.prec, other.prec))

    def certainly_gt(self, x) -> bool:
        o = coerce(x, self.prec)
        return L.mpf_gt(self._lo, o._hi)

    def certainly_ge(self, x) -> bool:
        o = coerce(x, self.prec)
        return L.mpf_ge(self._lo, o._hi)

    def certainly_lt(self, x) -> bool:
        o = coerce(x, self.prec)
        return L.mpf_lt(self._hi, o._lo)

    def certainly_le(self, x) -> bool:
        o = coerce(x, self.prec)
        return L.mpf_le(self._hi, o._lo)

    def contains_zero(self) -> bool:
        return L.mpf_sign(self._lo) <= 0 <= L.mpf_sign(self._hi)

    def __eq__(self, other):
        if not isinstance(other, CertInterval):
            return NotImplemented
        return self._lo == other._lo and self._hi == other._hi

    def __hash__(self):
        return hash((self._lo, self._hi))

    # -- arithmetic ------------------------------------------------------

    def _p(self, other):
        return max(self.prec, other.prec)

    def __neg__(self):
        return CertInterval._raw(L.mpf_neg(self._hi), L.mpf_neg(self._lo), self.prec)

    def __add__(self, other):
        o = coerce(other, self.prec)
        p = self._p(o)
        return CertInterval._raw(L.mpf_add(self._lo, o._lo, p, _F), L.mpf_add(self._hi, o._hi, p, _C), p)

    __radd__ = __add__

    def __sub__(self, other):
        o = coerce(other, self.prec)
        p = self._p(o)
        return CertInterval._raw(L.mpf_sub(self._lo, o._hi, p, _F), L.mpf_sub(self._hi, o._lo, p, _C), p)

    def __rsub__(self, other):
        return coerce(other, self.prec) - self

    def __mul__(self, other):
        o = coerce(other, self.prec)
        p = self._p(o)
        a, b, c, d = self._lo, self._hi, o._lo, o._hi
        los = [L.mpf_mul(x, y, p, _F) for x, y in ((a, c), (a, d), (b, c), (b, d))]
        his = [L.mpf_mul(x, y, p, _C) for x, y in ((a, c), (a, d), (b, c), (b, d))]
        lo, hi = los[0], his[0]
        for v in los[1:]:
            lo = _min(lo, v)
        for v in his[1:]:
            hi = _max(hi, v)
        return CertInterval._raw(lo, hi, p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = coerce(other, self.prec)
        if o.contains_zero():
            raise ZeroDivisionError("divisor interval contains zero")
        p = self._p(o)
        a, b, c, d = self._lo, self._hi, o._lo, o._hi
        los = [L.mpf_div(x, y, p, _F) for x, y in ((a, c), (a, d), (b, c), (b, d))]
        his = [L.mpf_div(x, y, p, _C) for x, y in ((a, c), (a, d), (b, c), (b, d))]
        lo, hi = los[0], his[0]
        for v in los[1:]:
            lo = _min(lo, v)
        for v in his[1:]:
            hi = _max(hi, v)
        return CertInterval._raw(lo, hi, p)

    def __rtruediv__(self, other):
        return coerce(other, self.prec) / self

    def scale_down(self, base: int, k: int) -> "CertInterval":
        """Divide by ``base**k`` (exact shift for base 2)."""
        if k == 0:
            return self
        if base == 2:
            return CertInterval._raw(L.mpf_shift(self._lo, -k), L.mpf_shift(self._hi, -k), self.prec)
        q = L.from_int(base ** k)
        return CertInterval._raw(L.mpf_div(self._lo, q, self.prec, _F),
                                 L.mpf_div(self._hi, q, self.prec, _C), self.prec)

    def __abs__(self):
        if L.mpf_sign(self._lo) >= 0:
            return self
        if L.mpf_sign(self._hi) <= 0:
            return -self
        return CertInterval._raw(_ZERO, _max(L.mpf_neg(self._lo), self._hi), self.prec)

    def pow_int(self, n: int) -> "CertInterval":
        if n < 0:
            raise ValueError("negative exponent")
        if n == 0:
            return CertInterval._raw(_ONE, _ONE, self.prec)
        p = self.prec
        if n % 2 == 1:
            return CertInterval._raw(L.mpf_pow_int(self._lo, n, p, _F), L.mpf_pow_int(self._hi, n, p, _C), p)
        a = abs(self)
        return CertInterval._raw(L.mpf_pow_int(a._lo, n, p, _F), L.mpf_pow_int(a._hi, n, p, _C), p)

    def __pow__(self, n: int):
        return self.pow_int(n)

    def log(self) -> "CertInterval":
        if L.mpf_sign(self._lo) <= 0:
            raise ValueError("log of an interval not strictly positive")
        p = self.prec
        lo = L.mpf_log(self._lo, p, _F)
        hi = L.mpf_log(self._hi, p, _C)
        if self._lo != _ONE:
            lo = _down(lo, p)
        if self._hi != _ONE:
            hi = _up(hi, p)
        return CertInterval._raw(lo, hi, p)

    def log_plus(self) -> "CertInterval":
        """Enclosure of ``max(log|x|, 0)`` over the interval."""
        a = abs(self)
        p = self.prec
        if L.mpf_le(a._hi, _ONE):
            return CertInterval._raw(_ZERO, _ZERO, p)
        hi = _up(L.mpf_log(a._hi, p, _C), p)
        if L.mpf_le(a._lo, _ONE):
            lo = _ZERO
        else:
            lo = _down(L.mpf_log(a._lo, p, _F), p)
        return CertInterval._raw(lo, hi, p)

    def exp(self) -> "CertInterval":
        p = self.prec
        lo = L.mpf_exp(self._lo, p, _F)
        hi = L.mpf_exp(self._hi, p, _C)
        if self._lo != _ZERO:
            lo = _down(lo, p)
        if self._hi != _ZERO:
            hi = _up(hi, p)
        return CertInterval._raw(lo, hi, p)

    def sqrt(self) -> "CertInterval":
        if L.mpf_sign(self._lo) < 0:
            raise ValueError("sqrt of an interval with negative part")
        p = self.prec
        return CertInterval._raw(L.mpf_sqrt(self._lo, p, _F), L.mpf_sqrt(self._hi, p, _C), p)

    def symmetric(self) -> "CertInterval":
        """``[-r, r]`` for the largest absolute value r in the interval."""
        r = abs(self)._hi
        return CertInterval._raw(L.mpf_neg(r), r, self.prec)

    def clamp_nonneg(self) -> "CertInterval":
        """Intersect with ``[0, inf)``; the operand must meet it."""
        if L.mpf_sign(self._hi) < 0:
            raise ValueError("interval is entirely negative")
        if L.mpf_sign(self._lo) >= 0:
            return self
        return CertInterval._raw(_ZERO, self._hi, self.prec)

    def maximum(self, other) -> "CertInterval":
        o = coerce(other, self.prec)
        return CertInterval._raw(_max(self._lo, o._lo), _max(self._hi, o._hi), self._p(o))

    def __repr__(self):
        lo, hi = self.endpoints_str(12)
        return f"CertInterval([{lo}, {hi}])"


def _rebuild(lo, hi, prec):
    return CertInterval._raw(lo, hi, prec)


def coerce(x, prec: int = DEFAULT_PREC) -> CertInterval:
    if isinstance(x, CertInterval):
        return x
    return CertInterval(x, x, prec)


def log_of(q, prec: int = DEFAULT_PREC) -> CertInterval:
    """Enclosure of ``log q`` for an exact positive rational ``q``."""
    return CertInterval.exact(q, prec).log()
