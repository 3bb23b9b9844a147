"""Exhaustive searches for the smallest positive canonical height, c in Z.

Since ``|h_hat - h| <= log|2c| / (d - 1)`` for integral c, once a
wandering point of height at most ``t`` is known, every competitor has
naive height at most ``t + log|2c| / (d - 1)``; that finite ball is
scanned completely.  Two cheap certified floors prune most of it:

* ``h_hat(a/b) >= log b`` (the denominator is all non-archimedean height);
* ``h_hat(a/b) >= log|a| + log(1 - 2**-d) / (d - 1)`` once ``a/b`` lies in
  the archimedean basin.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterator

from .dynamics import MapParams, Preperiodic, Undecided, Wandering, arch_escape_threshold, decide_preperiodic, orbit
from .errors import CanHeightError, DomainError
from .factor import prime_factors
from .height import canonical_height
from .intervals import DEFAULT_PREC, CertInterval, log_of

__all__ = [
    "enumerate_rationals",
    "rational_sort_key",
    "SurveyRow",
    "min_wandering_height",
    "figure1_dataset",
    "FamilyScanRow",
    "family_ratio_scan",
    "SEED_POOL",
]

SEED_POOL = 32
_SEED_CERTIFY = 4
_FLOAT_MARGIN = 1e-9


def rational_sort_key(q: Fraction) -> tuple:
    """Enumeration order: ``max(|a|, b)``, then ``|a|``, then sign (+ first), then b."""
    a, b = q.numerator, q.denominator
    return (max(abs(a), b), abs(a), 0 if a >= 0 else 1, b)


def _height_bound(h_max: float) -> int:
    if h_max < 0:
        raise DomainError("h_max must be non-negative")
    H = int(math.floor(math.exp(h_max)))
    # exp may round either way near an integer
    while math.log(H + 1) <= h_max:
        H += 1
    while H > 1 and math.log(H) > h_max:
        H -= 1
    return max(H, 1)


def enumerate_rationals(h_max: float) -> Iterator[Fraction]:
    """Every a/b in lowest terms with ``max(|a|, b) <= exp(h_max)``, exactly once."""
    H = _height_bound(h_max)
    yield Fraction(0)
    for n in range(1, H + 1):
        block = []
        for b in range(1, n + 1):
            if gcd(n, b) == 1:
                block.append(Fraction(n, b))
                block.append(Fraction(-n, b))
        for a in range(1, n):
            if gcd(a, n) == 1:
                block.append(Fraction(a, n))
                block.append(Fraction(-a, n))
        block.sort(key=rational_sort_key)
        yield from block


def _coprime_count(x: int, primes: list[int]) -> int:
    """``#{1 <= a <= x : gcd(a, b) = 1}`` where ``primes`` are the primes of b."""
    if x <= 0:
        return 0
    total = 0
    k = len(primes)
    for mask in range(1 << k):
        prod, bits = 1, 0
        for i in range(k):
            if mask >> i & 1:
                prod *= primes[i]
                bits += 1
        total += (-1) ** bits * (x // prod)
    return total


def _ball_count(H: int) -> int:
    """Number of rationals with ``max(|a|, b) <= H``."""
    return 1 + sum(2 * _coprime_count(H, sorted(prime_factors(b))) for b in range(1, H + 1))


@dataclass(frozen=True)
class SurveyRow:
    c: int
    min_height: CertInterval | None
    argmin: Fraction | None
    ratio: CertInterval | None
    candidates_examined: int
    preperiodic_excluded: tuple[Fraction, ...] = ()
    ties: tuple[Fraction, ...] = ()
    search_bound: int = 0
    heights_evaluated: int = 0
    error: str | None = None


def _normalizer(c: int, prec: int) -> CertInterval:
    # log|c|, except at |c| = 1 where it vanishes and 1 is used instead
    if abs(c) == 1:
        return CertInterval.exact(1, prec)
    return log_of(abs(c), prec)


def _float_estimate(q: Fraction, c: int, d: int) -> float:
    """Uncertified ``log b + lambda_hat_inf(q)``; only used to rank seeds."""
    y = q.numerator / q.denominator
    scale = 1.0
    for _ in range(64):
        if abs(y) > 1e30:
            return math.log(q.denominator) + scale * math.log(abs(y))
        y = y ** d + c
        scale /= d
    return math.log(q.denominator) + scale * math.log(max(abs(y), 1.0))


def _seed(params: MapParams, eps: float, prec: int):
    c, d = params.c.numerator, params.d
    pool = []
    for b in range(1, SEED_POOL + 1):
        for a in range(-SEED_POOL, SEED_POOL + 1):
            if gcd(a, b) == 1:
                q = Fraction(a, b)
                pool.append((_float_estimate(q, c, d), rational_sort_key(q), q))
    pool.sort()
    certified = []
    for _, _, q in pool:
        if isinstance(decide_preperiodic(q, params), Wandering):
            certified.append((q, canonical_height(q, params, eps, prec=prec).total))
            if len(certified) >= _SEED_CERTIFY:
                break
    if not certified:
        raise CanHeightError("seed pool holds no wandering point")
    return min(certified, key=lambda t: t[1].hi)


def min_wandering_height(c: int, d: int = 2, eps: float = 1e-4, eps_min: float = 1e-10,
                         prec: int = DEFAULT_PREC) -> SurveyRow:
    """Certified minimum of the canonical height over wandering rationals."""
    cq = Fraction(c)
    if cq.denominator != 1:
        raise DomainError("the survey needs integral c")
    if cq == 0:
        raise DomainError("the survey needs c != 0")
    c = cq.numerator
    params = MapParams(cq, d)
    seed_q, seed_h = _seed(params, eps, prec)
    lemma = math.log(abs(2 * c)) / (d - 1)
    H = _height_bound(float(seed_h.hi) + _FLOAT_MARGIN + lemma)
    threshold = arch_escape_threshold(params)
    basin_floor = math.log(1 - 2.0 ** -d) / (d - 1)

    best_hi = float(seed_h.hi)
    evaluated: list[tuple[Fraction, CertInterval]] = [(seed_q, seed_h)]
    preperiodic: list[Fraction] = []
    examined = 0
    n_eval = 1

    def consider(q: Fraction):
        nonlocal best_hi, n_eval
        verdict = decide_preperiodic(q, params)
        if isinstance(verdict, Preperiodic):
            preperiodic.append(q)
            return
        if isinstance(verdict, Undecided):
            raise CanHeightError(f"preperiodicity of {q} undecided at c={c}")
        if q == seed_q:
            return
        h = canonical_height(q, params, eps, prec=prec).total
        n_eval += 1
        evaluated.append((q, h))
        best_hi = min(best_hi, float(h.hi))

    for b in range(1, H + 1):
        primes = sorted(prime_factors(b)) if b > 1 else []
        if math.log(b) > best_hi + _FLOAT_MARGIN:
            examined += sum(2 * _coprime_count(H, sorted(prime_factors(bb))) for bb in range(b, H + 1))
            break
        if b == 1:
            consider(Fraction(0))
            examined += 1
        for a in range(1, H + 1):
            if gcd(a, b) != 1:
                continue
            q = Fraction(a, b)
            if q ** d > threshold and math.log(a) + basin_floor > best_hi + _FLOAT_MARGIN:
                # the floor grows with |a|: the rest of this row is out
                examined += 2 * (_coprime_count(H, primes) - _coprime_count(a - 1, primes))
                break
            for s in (q, -q):
                consider(s)
                examined += 1

    ball = _ball_count(H)
    if examined != ball:
        raise AssertionError(f"scan covered {examined} of {ball} points at c={c}")

    contenders = [(q, h) for q, h in evaluated if float(h.lo) <= best_hi + _FLOAT_MARGIN]
    e = eps
    while len(contenders) > 1 and e > eps_min:
        e = max(e / 100, eps_min)
        contenders = [(q, canonical_height(q, params, e, prec=prec).total) for q, _ in contenders]
        n_eval += len(contenders)
        top = min(h.hi for _, h in contenders)
        contenders = [(q, h) for q, h in contenders if h.lo <= top]
    ties = sorted((q for q, _ in contenders), key=rational_sort_key)
    lo = min(h.lo for _, h in contenders)
    hi = min(h.hi for _, h in contenders)
    min_h = CertInterval(lo, hi, prec)
    return SurveyRow(
        c=c,
        min_height=min_h,
        argmin=ties[0],
        ratio=min_h / _normalizer(c, prec),
        candidates_examined=examined,
        preperiodic_excluded=tuple(sorted(preperiodic, key=rational_sort_key)),
        ties=tuple(ties),
        search_bound=H,
        heights_evaluated=n_eval,
    )


def _row_or_error(args) -> SurveyRow:
    c, d, eps = args
    try:
        return min_wandering_height(c, d, eps)
    except CanHeightError as exc:
        return SurveyRow(c, None, None, None, 0, error=f"{type(exc).__name__}: {exc}")


def figure1_dataset(c_from: int, c_to: int, eps: float = 1e-4, jobs: int = 1, d: int = 2) -> list[SurveyRow]:
    """One row per c in ``[c_from, c_to]``; failures are recorded in-row."""
    if not c_from <= c_to <= -1:
        raise DomainError("need c_from <= c_to <= -1")
    work = [(c, d, eps) for c in range(c_from, c_to + 1)]
    if jobs <= 1:
        return [_row_or_error(w) for w in work]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_row_or_error, work))


@dataclass(frozen=True)
class FamilyScanRow:
    k: int
    c: int
    second_iterate_ok: bool
    height: CertInterval
    ratio: CertInterval


def family_ratio_scan(k_from: int, k_to: int, eps: float = 1e-6,
                      prec: int = DEFAULT_PREC) -> list[FamilyScanRow]:
    """``h_hat(k) / log|c|`` along ``c = -k**2 - k + 1``, where ``phi^2(k) = 2 - 3k``."""
    if not 2 <= k_from <= k_to:
        raise DomainError("need 2 <= k_from <= k_to")
    rows = []
    for k in range(k_from, k_to + 1):
        c = -k * k - k + 1
        params = MapParams(c, 2)
        ok = orbit(k, params, 2)[2] == 2 - 3 * k
        h = canonical_height(k, params, eps, prec=prec).total
        rows.append(FamilyScanRow(k, c, ok, h, h / log_of(-c, prec)))
    return rows
