"""Exact arithmetic in GF(p^k) backed by exp/log tables.

Elements are ints in [0, q-1]: the coefficient vector of the residue
polynomial packed base p, lowest degree in the least significant digit.
0 is zero and 1 is one. The modulus is the monic irreducible polynomial of
degree k with the smallest packed value, and the primitive element ``xi`` is
the smallest element of multiplicative order q-1, so every table and every
downstream witness is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .arith import PrimePower, factorize, is_prime_power
from .errors import CapacityError

TABLE_LIMIT = 1 << 20
_ADD_TABLE_LIMIT = 256

__all__ = [
    "FiniteField",
    "MultiplicativeSubgroup",
    "PrimePower",
    "TABLE_LIMIT",
    "construct_field",
    "cosets",
    "discrete_log",
    "field_ops",
    "is_prime_power",
    "subgroup_of_order",
]


# -- polynomials over GF(p): coefficient lists, lowest degree first ---------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _trim(list(a))
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm:
        coef = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - coef * c) % p
        _trim(a)
    return a


def _polymulmod(a: list[int], b: list[int], m: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _polymod(out, m, p)


def _polypowmod(a: list[int], e: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = _polymod(a, m, p)
    while e:
        if e & 1:
            result = _polymulmod(result, base, m, p)
        base = _polymulmod(base, base, m, p)
        e >>= 1
    return result


def _polygcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _polymod(a, b, p)
    return a


def _minus_x(h: list[int], p: int) -> list[int]:
    out = list(h) + [0] * max(0, 2 - len(h))
    out[1] = (out[1] - 1) % p
    return _trim(out)


def _is_irreducible(f: list[int], p: int) -> bool:
    """Rabin's test for a monic polynomial f of degree k over GF(p)."""
    k = len(f) - 1
    if k == 1:
        return True
    # frob[i] = x^(p^i) mod f
    frob = [[0, 1]]
    for _ in range(k):
        frob.append(_polypowmod(frob[-1], p, f, p))
    if _minus_x(frob[k], p):
        return False
    for r in factorize(k):
        if len(_polygcd(f, _minus_x(frob[k // r], p), p)) > 1:
            return False
    return True


def _unpack(a: int, p: int, k: int) -> list[int]:
    out = []
    for _ in range(k):
        a, r = divmod(a, p)
        out.append(r)
    return out


def _pack(digits: list[int], p: int) -> int:
    v = 0
    for c in reversed(digits):
        v = v * p + c
    return v


def _smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    base = p**k
    for packed in range(base, 2 * base):
        f = _unpack(packed, p, k + 1)
        if f[0] == 0 and k > 1:
            continue  # divisible by x
        if _is_irreducible(f, p):
            return tuple(f)
    raise AssertionError(f"no irreducible polynomial of degree {k} over GF({p})")


# -- the field ----------------------------------------------------------------


class FiniteField:
    """GF(q) with dense exp/log tables. Immutable after construction."""

    def __init__(self, order: PrimePower):
        p, k = order.p, order.k
        q = order.q
        self.order = order
        self.p, self.k, self.q = p, k, q
        self.modulus: tuple[int, ...] = _smallest_irreducible(p, k)
        mod = list(self.modulus)

        mod_bits = _pack(mod, 2) if p == 2 else 0

        def mul_slow(a: int, b: int) -> int:
            if k == 1:
                return a * b % p
            if p == 2:
                out = 0
                while b:
                    if b & 1:
                        out ^= a
                    b >>= 1
                    a <<= 1
                    if a >> k:
                        a ^= mod_bits
                return out
            return _pack(_polymulmod(_unpack(a, p, k), _unpack(b, p, k), mod, p), p)

        def pow_slow(a: int, e: int) -> int:
            if k == 1:
                return pow(a, e, p)
            return _pack(_polypowmod(_unpack(a, p, k), e, mod, p), p)

        n = q - 1
        prime_factors = list(factorize(n)) if n > 1 else []
        xi = 1
        for g in range(1, q):
            if all(pow_slow(g, n // r) != 1 for r in prime_factors):
                xi = g
                break
        self.xi = xi

        exp = [0] * n
        log = [-1] * q
        x = 1
        for i in range(n):
            exp[i] = x
            log[x] = i
            x = mul_slow(x, xi)
        self.exp_table: tuple[int, ...] = tuple(exp)
        self.log_table: tuple[int, ...] = tuple(log)

        self._add_table = None
        if k > 1 and p != 2 and q <= _ADD_TABLE_LIMIT:
            self._add_table = tuple(
                tuple(self._add_digits(a, b) for b in range(q)) for a in range(q)
            )

    def __repr__(self) -> str:
        return f"FiniteField(q={self.q}, modulus={self.modulus}, xi={self.xi})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteField) and other.q == self.q

    def __hash__(self) -> int:
        return hash(("GF", self.q))

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def elements(self) -> range:
        return range(self.q)

    def nonzero(self) -> range:
        return range(1, self.q)

    def _check(self, a: int) -> None:
        if not 0 <= a < self.q:
            raise ValueError(f"{a} is not an element of GF({self.q})")

    def _add_digits(self, a: int, b: int) -> int:
        p = self.p
        out, scale = 0, 1
        for _ in range(self.k):
            a, x = divmod(a, p)
            b, y = divmod(b, p)
            out += ((x + y) % p) * scale
            scale *= p
        return out

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        if self._add_table is not None:
            return self._add_table[a][b]
        return self._add_digits(a, b)

    def neg(self, a: int) -> int:
        if self.k == 1:
            return -a % self.p
        if self.p == 2:
            return a
        p = self.p
        out, scale = 0, 1
        for _ in range(self.k):
            a, x = divmod(a, p)
            out += (-x % p) * scale
            scale *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp_table[(self.log_table[a] + self.log_table[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse in GF({self.q})")
        return self.exp_table[-self.log_table[a] % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError(f"0 raised to negative power {e}")
            return 1 if e == 0 else 0
        return self.exp_table[self.log_table[a] * e % (self.q - 1)]

    def log(self, a: int) -> int:
        if a == 0:
            raise ValueError("discrete log of 0 is undefined")
        self._check(a)
        return self.log_table[a]

    def exp(self, t: int) -> int:
        return self.exp_table[t % (self.q - 1)]


@dataclass(frozen=True)
class MultiplicativeSubgroup:
    field: FiniteField
    order: int
    elements: frozenset

    @property
    def generator(self) -> int:
        return self.field.exp((self.field.q - 1) // self.order)

    def __contains__(self, x: int) -> bool:
        return x in self.elements

    def __len__(self) -> int:
        return self.order


@lru_cache(maxsize=64)
def _construct_field(q: int) -> FiniteField:
    pp = is_prime_power(q)
    return FiniteField(pp)


def construct_field(q: int) -> FiniteField:
    """Canonical GF(q); cached, so repeated calls return the same object."""
    if q < 2 or is_prime_power(q) is None:
        raise ValueError(f"{q} is not a prime power")
    if q > TABLE_LIMIT:
        raise CapacityError(f"GF({q}) exceeds the table limit {TABLE_LIMIT}")
    return _construct_field(q)


def field_ops(F: FiniteField, a: int, b: int | None, kind: str) -> int:
    """Dispatch one field operation by name: add|sub|mul|div|neg|inv|pow.

    For ``pow`` the second operand is an integer exponent.
    """
    if kind == "neg":
        return F.neg(a)
    if kind == "inv":
        return F.inv(a)
    ops = {"add": F.add, "sub": F.sub, "mul": F.mul, "div": F.div, "pow": F.pow}
    if kind not in ops:
        raise ValueError(f"unknown field operation {kind!r}")
    return ops[kind](a, b)


def discrete_log(F: FiniteField, x: int) -> int:
    return F.log(x)


def subgroup_of_order(F: FiniteField, d: int) -> MultiplicativeSubgroup:
    n = F.q - 1
    if d < 1 or n % d:
        raise ValueError(f"{d} does not divide {n}")
    step = n // d
    elems = frozenset(F.exp_table[j * step] for j in range(d))
    return MultiplicativeSubgroup(F, d, elems)


def cosets(F: FiniteField, G: MultiplicativeSubgroup) -> list[frozenset]:
    """Cosets xi^i * G for i = 0 .. (q-1)/d - 1; the first one is G."""
    if G.field != F:
        raise ValueError("subgroup belongs to a different field")
    out = []
    for i in range((F.q - 1) // G.order):
        shift = F.exp(i)
        out.append(frozenset(F.mul(shift, g) for g in G.elements))
    return out
