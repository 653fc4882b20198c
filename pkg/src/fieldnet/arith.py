"""Integer number theory: primality, factorization, divisors, prime powers.

Everything here works on Python ints, so values far beyond 64 bits are fine
as long as factorization stays within budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from .errors import CapacityError

TRIAL_LIMIT = 10**6
RHO_BUDGET = 2_000_000

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


@dataclass(frozen=True, order=True)
class PrimePower:
    p: int
    k: int

    @property
    def q(self) -> int:
        return self.p**self.k


def is_prime(n: int) -> bool:
    """Miller-Rabin with fixed bases; deterministic below 3.3e24."""
    if n < 2:
        return False
    for sp in _SMALL_PRIMES:
        if n % sp == 0:
            return n == sp
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def iroot(n: int, e: int) -> int:
    """Largest r with r**e <= n."""
    if n < 2 or e == 1:
        return n
    r = int(round(n ** (1.0 / e))) if n.bit_length() < 1000 else 1 << (n.bit_length() // e)
    # float guess may be off by a few units either way
    while r**e > n:
        r -= 1
    while (r + 1) ** e <= n:
        r += 1
    return r


def is_prime_power(n: int) -> PrimePower | None:
    if n < 2:
        raise ValueError(f"is_prime_power needs n >= 2, got {n}")
    for e in range(n.bit_length(), 0, -1):
        r = iroot(n, e)
        if r >= 2 and r**e == n and is_prime(r):
            return PrimePower(r, e)
    return None


_BLOCK = 1 << 16


def _small_primes(limit: int) -> list[int]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, limit + 1, i)))
    return [i for i in range(limit + 1) if sieve[i]]


def _prime_powers_block(lo: int, hi: int) -> list[int]:
    """Prime powers in [lo, hi), by a segmented sieve."""
    root = math.isqrt(hi - 1)
    base = _small_primes(root)
    marks = bytearray([1]) * (hi - lo)
    for p in base:
        start = max(p * p, -(-lo // p) * p)
        marks[start - lo :: p] = bytearray(len(range(start, hi, p)))
    found = {lo + i for i, m in enumerate(marks) if m and lo + i >= 2}
    for p in base:
        pk = p
        while pk < hi:
            if pk >= lo:
                found.add(pk)
            pk *= p
    return sorted(found)


def prime_powers(start: int = 2, stop: int | None = None) -> Iterator[int]:
    """Prime powers in ascending order from ``start`` (inclusive) to ``stop`` (exclusive)."""
    lo = max(start, 2)
    while stop is None or lo < stop:
        hi = lo + _BLOCK if stop is None else min(lo + _BLOCK, stop)
        yield from _prime_powers_block(lo, hi)
        lo = hi


def prime_powers_desc(top: int) -> Iterator[int]:
    """Prime powers <= top in descending order."""
    hi = top + 1
    while hi > 2:
        lo = max(2, hi - _BLOCK)
        yield from reversed(_prime_powers_block(lo, hi))
        hi = lo


def _rho(n: int, budget: int) -> int | None:
    # Brent's variant; returns a nontrivial factor or None when budget runs out
    if n % 2 == 0:
        return 2
    spent = 0
    for c in range(1, 50):
        y, r, g, q = 2, 1, 1, 1
        f = lambda v: (v * v + c) % n  # noqa: E731
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = f(y)
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = f(y)
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += 128
            r *= 2
            spent += r
            if spent > budget:
                return None
        if g == n:
            g = 1
            while g == 1:
                ys = f(ys)
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    return None


@lru_cache(maxsize=4096)
def _factor_cached(n: int, trial_limit: int, rho_budget: int) -> tuple[tuple[int, int], ...]:
    out: dict[int, int] = {}
    m = n
    for p in (2, 3):
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
    p = 5
    step = 2
    while p <= trial_limit and p * p <= m:
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
        p += step
        step = 6 - step
    stack = [m] if m > 1 else []
    while stack:
        x = stack.pop()
        if is_prime(x):
            out[x] = out.get(x, 0) + 1
            continue
        pp = is_prime_power(x)
        if pp is not None:
            out[pp.p] = out.get(pp.p, 0) + pp.k
            continue
        f = _rho(x, rho_budget)
        if f is None:
            raise CapacityError(f"could not factor {x} within rho budget {rho_budget}")
        stack.extend((f, x // f))
    return tuple(sorted(out.items()))


def factorize(n: int, trial_limit: int = TRIAL_LIMIT, rho_budget: int = RHO_BUDGET) -> dict[int, int]:
    """Prime factorization as {prime: exponent}. Raises CapacityError if rho gives up."""
    if n < 1:
        raise ValueError(f"factorize needs n >= 1, got {n}")
    return dict(_factor_cached(n, trial_limit, rho_budget))


def divisors(n: int) -> list[int]:
    """All positive divisors of n, ascending."""
    divs = [1]
    for p, e in factorize(n).items():
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def multiplicative_order(a: int, m: int) -> int | None:
    """Smallest t >= 1 with a^t = 1 mod m, or None when gcd(a, m) != 1."""
    if m == 1:
        return 1
    if math.gcd(a, m) != 1:
        return None
    phi = 1
    for p, e in factorize(m).items():
        phi *= (p - 1) * p ** (e - 1)
    t = phi
    for p in factorize(phi):
        while t % p == 0 and pow(a, t // p, m) == 1:
            t //= p
    return t


def ceil_div(a: int, b: int) -> int:
    return -(-a // b)
