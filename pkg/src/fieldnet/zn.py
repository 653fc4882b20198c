"""Subsets of the cyclic group Z_n: sumsets, stabilizers, Kneser-type bounds.

Sets are stored as bitmasks (bit i set iff i is a member), which keeps
translation a rotation and a sumset a handful of ORs.
"""

from __future__ import annotations

import os
from math import gcd
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, NamedTuple, Sequence

from .arith import ceil_div, divisors
from .errors import CapacityError

DEFAULT_ORACLE_LIMIT = 16
ORACLE_ENV = "FIELDNET_ORACLE_LIMIT"


def oracle_limit() -> int:
    """Largest n the brute-force oracle accepts; overridable via FIELDNET_ORACLE_LIMIT."""
    raw = os.environ.get(ORACLE_ENV)
    return int(raw) if raw else DEFAULT_ORACLE_LIMIT


def _rot(mask: int, t: int, n: int, full: int) -> int:
    t %= n
    if t == 0:
        return mask
    return ((mask << t) | (mask >> (n - t))) & full


def _bits(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


@dataclass(frozen=True)
class ZnSet:
    n: int
    mask: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"modulus must be >= 1, got {self.n}")
        if self.mask >> self.n:
            raise ValueError(f"members out of range for Z_{self.n}")

    @classmethod
    def of(cls, n: int, members: Iterable[int]) -> "ZnSet":
        mask = 0
        for m in members:
            if not 0 <= m < n:
                raise ValueError(f"{m} is not in Z_{n}")
            mask |= 1 << m
        return cls(n, mask)

    @classmethod
    def full(cls, n: int) -> "ZnSet":
        return cls(n, (1 << n) - 1)

    @property
    def members(self) -> frozenset:
        return frozenset(_bits(self.mask))

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __iter__(self):
        return iter(_bits(self.mask))

    def __contains__(self, x: int) -> bool:
        return 0 <= x < self.n and bool(self.mask >> x & 1)

    def shift(self, g: int) -> "ZnSet":
        return ZnSet(self.n, _rot(self.mask, g, self.n, (1 << self.n) - 1))

    def __repr__(self) -> str:
        return f"ZnSet({self.n}, {sorted(self)})"


def sumset(A: ZnSet, B: ZnSet) -> ZnSet:
    if A.n != B.n:
        raise ValueError(f"modulus mismatch: Z_{A.n} vs Z_{B.n}")
    n, full = A.n, (1 << A.n) - 1
    out = 0
    for b in B:
        out |= _rot(A.mask, b, n, full)
    return ZnSet(n, out)


def iterated_sumset(sets: Sequence[ZnSet]) -> ZnSet:
    if not sets:
        raise ValueError("iterated_sumset needs at least one set")
    acc = sets[0]
    for s in sets[1:]:
        acc = sumset(acc, s)
    return acc


def stabilizer(S: ZnSet) -> ZnSet:
    """{g : g + S = S}; all of Z_n for the empty set and for Z_n itself."""
    n, full = S.n, (1 << S.n) - 1
    mask = 0
    for g in range(n):
        if _rot(S.mask, g, n, full) == S.mask:
            mask |= 1 << g
    return ZnSet(n, mask)


def _check_cards(n: int, cards: Sequence[int]) -> None:
    if not cards:
        raise ValueError("need at least one cardinality")
    for c in cards:
        if not 1 <= c <= n:
            raise ValueError(f"cardinality {c} outside [1, {n}]")


def _coset_bound(d: int, cards: Sequence[int]) -> int:
    return d * (sum(ceil_div(c, d) for c in cards) - (len(cards) - 1))


def kneser_bound(sets: Sequence[ZnSet]) -> int:
    """|H| (sum ceil(|A_i|/|H|) - (k-1)) with H the stabilizer of the sumset."""
    if not sets:
        raise ValueError("kneser_bound needs at least one set")
    if any(len(s) == 0 for s in sets):
        raise ValueError("kneser_bound needs nonempty sets")
    h = len(stabilizer(iterated_sumset(sets)))
    return _coset_bound(h, [len(s) for s in sets])


def cd_bound(n: int, cards: Sequence[int]) -> int:
    """Minimum over divisors d of n of d (sum ceil(c_i/d) - (k-1))."""
    _check_cards(n, cards)
    return min(_coset_bound(d, cards) for d in divisors(n))


class MinSumset(NamedTuple):
    size: int
    witness: list
    divisor: int


def coset_union_sets(n: int, d: int, cards: Sequence[int]) -> list[ZnSet]:
    """For each c, the first c elements of {0, ..., ceil(c/d)-1} + H, H the order-d subgroup.

    Their sum lies in {0, ..., sum ceil(c/d) - k} + H, so it has at most
    d (sum ceil(c_i/d) - (k-1)) elements.
    """
    if d < 1 or n % d:
        raise ValueError(f"{d} does not divide {n}")
    _check_cards(n, cards)
    step = n // d
    out = []
    for c in cards:
        width = ceil_div(c, d)
        u = sorted({a + h * step for a in range(width) for h in range(d)})
        out.append(ZnSet.of(n, u[:c]))
    return out


def exact_min_sumset(n: int, cards: Sequence[int]) -> MinSumset:
    """Smallest possible |T_1 + ... + T_k| with |T_i| = cards[i], plus sets attaining it.

    The witness comes from coset_union_sets at the smallest minimizing divisor.
    """
    _check_cards(n, cards)
    best_d, best = None, None
    for d in divisors(n):
        v = min(n, _coset_bound(d, cards))
        if best is None or v < best:
            best_d, best = d, v
    return MinSumset(best, coset_union_sets(n, best_d, cards), best_d)


# -- exhaustive oracle -----------------------------------------------------


def brute_min_sumset(n: int, cards: Sequence[int], limit: int | None = None) -> int:
    """True minimum of |T_1 + ... + T_k| over all subsets with the given sizes.

    Exhaustive and free of divisor or coset reasoning. Every T_i may be
    translated to contain 0 (that only shifts the sumset), and then all of
    them lie inside their sum. So the minimum is at most m exactly when some
    m-set X holds sets of the required sizes whose sum stays in X. Sizes m
    are tried upward from the trivial lower bound max(cards).
    """
    limit = oracle_limit() if limit is None else limit
    if n > limit:
        raise CapacityError(f"brute_min_sumset limited to n <= {limit}, got n={n}")
    _check_cards(n, cards)
    # sumset is commutative, so the multiset of sizes is all that matters
    return _brute(n, tuple(sorted(cards)))


@lru_cache(maxsize=None)
def _brute(n: int, cards: tuple[int, ...]) -> int:
    # singletons are translates and leave the size unchanged
    cards = tuple(c for c in cards if c > 1)
    if not cards:
        return 1
    if len(cards) == 1:
        return cards[0]
    targets = _targets(n)
    prefix, last = cards[:-1], cards[-1]
    for m in range(last, n):
        for X in targets[m]:
            if _max_last(n, X, prefix) >= last:
                return m
    return n


@lru_cache(maxsize=None)
def _targets(n: int) -> dict[int, list[int]]:
    """Sets containing 0, one per class under x -> u*x + r (u a unit), grouped by size.

    Applying one such map to every T_i maps their sum the same way, so
    checking one target per class loses nothing.
    """
    full = (1 << n) - 1
    units = [u for u in range(1, n) if gcd(u, n) == 1] or [1]
    scaled = [[1 << (u * i % n) for i in range(n)] for u in units]
    seen = bytearray(1 << n)
    out: dict[int, list[int]] = {m: [] for m in range(1, n + 1)}
    for X in range(1, full + 1, 2):
        if seen[X]:
            continue
        out[bin(X).count("1")].append(X)
        members = _bits(X)
        for table in scaled:
            Y = 0
            for i in members:
                Y |= table[i]
            for r in _bits(Y):
                seen[_rot(Y, -r, n, full)] = 1
    return out


@lru_cache(maxsize=None)
def _max_last(n: int, X: int, prefix: tuple[int, ...]) -> int:
    """Largest |T_last| such that sets of sizes prefix + (|T_last|), all containing 0, sum into X."""
    full = (1 << n) - 1
    members = _bits(X)
    limit = len(members)
    memo: dict[tuple[int, int], int] = {}

    def room(S: int) -> list[int]:
        # translates t with S + t still inside X
        return [t for t in members if _rot(S, t, n, full) & ~X == 0]

    def best(level: int, S: int) -> int:
        key = (level, S)
        if key in memo:
            return memo[key]
        r = room(S)
        if level == len(prefix):
            val = len(r)
        else:
            val = 0
            c = prefix[level]
            if len(r) >= c:
                for pick in combinations(r[1:], c - 1):
                    nxt = S
                    for t in pick:
                        nxt |= _rot(S, t, n, full)
                    val = max(val, best(level + 1, nxt))
                    if val == limit:
                        break
        memo[key] = val
        return val

    return best(0, 1)
