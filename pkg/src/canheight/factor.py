"""Integer factorization: trial division, Brent's rho, certified primality.

Primality below 3.3e24 is decided by Miller-Rabin with the first thirteen
prime bases, which is deterministic in that range.  Larger candidates get a
Pocklington certificate built from a partial factorization of ``n - 1``.
"""

from __future__ import annotations

import random
from math import gcd, isqrt

from .errors import DomainError, UnfactoredCofactorError

__all__ = ["is_prime", "factorize", "prime_factors", "DEFAULT_MAX_BITS"]

SMALL_PRIMES = [p for p in range(2, 1000) if all(p % q for q in range(2, isqrt(p) + 1))]
_MR_BASES = SMALL_PRIMES[:13]
_MR_LIMIT = 3317044064679887385961981
DEFAULT_MAX_BITS = 96
_RHO_ITERATIONS = 1 << 22


def _strong_probable_prime(n: int, a: int) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow(a, d, n)
    if x in (1, n - 1):
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int, max_bits: int = DEFAULT_MAX_BITS) -> bool:
    """Deterministic primality test.

    Raises UnfactoredCofactorError when ``n`` exceeds the certificate range
    (``n - 1`` could not be factored far enough for Pocklington).
    """
    if n < 2:
        return False
    for p in SMALL_PRIMES:
        if n % p == 0:
            return n == p
    if n < SMALL_PRIMES[-1] ** 2:
        return True
    if not all(_strong_probable_prime(n, a) for a in _MR_BASES):
        return False
    if n < _MR_LIMIT:
        return True
    return _pocklington(n, max_bits)


def _pocklington(n: int, max_bits: int) -> bool:
    # n is a strong probable prime here; certify with n - 1 = F * R, F > sqrt(n)
    m = n - 1
    known: list[int] = []
    for p in SMALL_PRIMES:
        if m % p == 0:
            known.append(p)
            while m % p == 0:
                m //= p
    f = (n - 1) // m
    rest = [m] if m > 1 else []
    while f * f <= n and rest:
        rest.sort()
        r = rest.pop(0)
        if is_prime(r, max_bits):
            known.append(r)
            while m % r == 0:
                m //= r
                f *= r
            continue
        g = _brent(r)
        if g is None:
            raise UnfactoredCofactorError(n)
        rest.extend([g, r // g])
    if f * f <= n:
        raise UnfactoredCofactorError(n)
    for q in known:
        for a in SMALL_PRIMES:
            if pow(a, n - 1, n) != 1:
                return False
            if gcd(pow(a, (n - 1) // q, n) - 1, n) == 1:
                break
        else:
            raise UnfactoredCofactorError(n)
    return True


def _brent(n: int, seed: int = 0x5EED) -> int | None:
    """A nontrivial factor of composite ``n`` or None within the budget."""
    if n % 2 == 0:
        return 2
    rng = random.Random(seed ^ n)
    for _ in range(8):
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        steps = 0
        while g == 1 and steps < _RHO_ITERATIONS:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            steps += r
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if 1 < g < n:
            return g
    return None


def factorize(n: int, max_bits: int = DEFAULT_MAX_BITS) -> dict[int, int]:
    """Prime factorization of ``|n|`` as ``{prime: exponent}``.

    Cofactors left after trial division are split with Brent's rho only up
    to ``max_bits`` bits; a larger composite cofactor raises
    UnfactoredCofactorError rather than returning an uncertified answer.
    """
    n = abs(int(n))
    if n == 0:
        raise DomainError("cannot factor zero")
    out: dict[int, int] = {}
    for p in SMALL_PRIMES:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
        if p * p > n:
            break
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if m < SMALL_PRIMES[-1] ** 2 or is_prime(m, max_bits):
            # below 997**2 any cofactor free of small primes is prime
            out[m] = out.get(m, 0) + 1
            continue
        if m.bit_length() > max_bits:
            raise UnfactoredCofactorError(m, found=sorted(out))
        g = _brent(m)
        if g is None:
            raise UnfactoredCofactorError(m, found=sorted(out))
        stack.extend([g, m // g])
    return dict(sorted(out.items()))


def prime_factors(n: int, max_bits: int = DEFAULT_MAX_BITS) -> list[int]:
    return list(factorize(n, max_bits))
