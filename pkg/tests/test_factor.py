import pytest
from hypothesis import given, strategies as st

from canheight.errors import DomainError, UnfactoredCofactorError
from canheight.factor import factorize, is_prime

from oracles import trial_factor


@given(st.integers(1, 10 ** 9))
def test_factorize_matches_trial_division(n):
    assert factorize(n) == trial_factor(n)


@pytest.mark.parametrize("n", [561, 1105, 1729, 2465, 2821, 6601, 8911, 3215031751, 3825123056546413051])
def test_carmichael_and_strong_pseudoprimes_are_composite(n):
    assert not is_prime(n)


@pytest.mark.parametrize("p", [2, 3, 1000003, 2 ** 61 - 1, 2 ** 89 - 1])
def test_known_primes(p):
    assert is_prime(p)


def test_semiprime_of_two_large_primes():
    p, q = 1000000007, 998244353
    assert factorize(p * q) == {p: 1, q: 1}


def test_prime_power():
    assert factorize(3 ** 20 * 7) == {3: 20, 7: 1}


def test_zero_is_rejected():
    with pytest.raises(DomainError):
        factorize(0)


def test_cofactor_beyond_cap_is_reported():
    big = (2 ** 61 - 1) * (2 ** 89 - 1)
    with pytest.raises(UnfactoredCofactorError) as info:
        factorize(big * 2 ** 127, max_bits=64)
    assert info.value.cofactor > 1
