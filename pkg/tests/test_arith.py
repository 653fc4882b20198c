from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from fieldnet.arith import (
    ceil_div,
    divisors,
    factorize,
    is_prime,
    is_prime_power,
    multiplicative_order,
    prime_powers,
    prime_powers_desc,
)


def naive_is_prime(n: int) -> bool:
    return n >= 2 and all(n % k for k in range(2, int(n**0.5) + 1))


def naive_prime_power(n: int):
    for p in range(2, n + 1):
        if naive_is_prime(p) and n % p == 0:
            k, m = 0, n
            while m % p == 0:
                m //= p
                k += 1
            return (p, k) if m == 1 else None
    return None


@pytest.mark.parametrize("n, expected", [(16, (2, 4)), (17, (17, 1)), (12, None), (2, (2, 1)), (729, (3, 6))])
def test_is_prime_power_examples(n, expected):
    pp = is_prime_power(n)
    assert (None if pp is None else (pp.p, pp.k)) == expected


def test_is_prime_power_rejects_small():
    with pytest.raises(ValueError):
        is_prime_power(1)


def test_is_prime_power_matches_trial_division():
    for n in range(2, 3000):
        pp = is_prime_power(n)
        assert (None if pp is None else (pp.p, pp.k)) == naive_prime_power(n)


def test_is_prime_large():
    assert is_prime(2**61 - 1)
    assert not is_prime(2**61 + 1)
    assert not is_prime(3215031751)  # strong pseudoprime to bases 2, 3, 5, 7


def test_prime_powers_sieve_matches_filter():
    expected = [n for n in range(2, 5000) if naive_prime_power(n)]
    assert list(prime_powers(2, 5000)) == expected
    assert list(prime_powers_desc(4999)) == expected[::-1]


def test_prime_powers_window():
    assert list(prime_powers(100, 130)) == [101, 103, 107, 109, 113, 121, 125, 127, 128]


@given(st.integers(min_value=2, max_value=10**12))
def test_factorize_reconstructs(n):
    f = factorize(n)
    prod = 1
    for p, e in f.items():
        assert is_prime(p)
        prod *= p**e
    assert prod == n


def test_factorize_needs_rho():
    n = 1000003 * 1000033
    assert factorize(n) == {1000003: 1, 1000033: 1}
    assert factorize(2**64 - 1) == {3: 1, 5: 1, 17: 1, 257: 1, 641: 1, 65537: 1, 6700417: 1}


@given(st.integers(min_value=1, max_value=5000))
def test_divisors_naive(n):
    assert divisors(n) == [k for k in range(1, n + 1) if n % k == 0]


@pytest.mark.parametrize("a, m, expected", [(2, 7, 3), (3, 7, 6), (3, 3, None), (2, 4, None), (5, 1, 1)])
def test_multiplicative_order(a, m, expected):
    assert multiplicative_order(a, m) == expected


@given(st.integers(min_value=-1000, max_value=1000), st.integers(min_value=1, max_value=50))
def test_ceil_div(a, b):
    assert ceil_div(a, b) == -(-a // b)
