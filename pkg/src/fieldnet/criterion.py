"""Field pairs (q, q') with a network solvable over GF(q) but not GF(q').

Everything is integer arithmetic on q, q' and subgroup orders (divisors of
q-1 and q'-1), so it scales to large fields as long as q'-1 can be factored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .arith import ceil_div, divisors, is_prime, is_prime_power, multiplicative_order
from .errors import CapacityError, InconsistencyError
from .netmodel import NetworkParams
from .solvability import closed_form_divisor, is_q_min, q_star_max, termination_bound

QMIN_VERIFY_LIMIT = 1 << 20
QSTAR_SCAN_LIMIT = 1 << 24

SHORTCUT_SMALLER = "q_prime<q"
SHORTCUT_PRIME_PLUS_ONE = "q_prime=prime+1"


@dataclass(frozen=True)
class CriterionResult:
    q: int
    q_prime: int
    valid_orders: tuple
    shortcut: str | None = None

    @property
    def satisfied(self) -> bool:
        return bool(self.valid_orders)

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "q": self.q,
            "q_prime": self.q_prime,
            "valid_orders": list(self.valid_orders),
            "shortcut": self.shortcut,
            "satisfied": self.satisfied,
        }


@dataclass(frozen=True)
class PairDiscovery:
    q: int
    q_prime: int
    d: int
    params: NetworkParams
    verified: bool
    q_star_max: int | None = None
    notes: tuple = field(default=())

    @property
    def omega(self) -> int:
        return self.params.omega

    @property
    def d_tuple(self) -> tuple:
        return self.params.d

    def to_json(self) -> dict:
        out = {
            "schema": 1,
            "q": self.q,
            "q_prime": self.q_prime,
            "d": self.d,
            "omega": self.omega,
            "d_tuple": list(self.d_tuple),
            "verified": self.verified,
        }
        if self.q_star_max is not None:
            out["q_star_max"] = self.q_star_max
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def _check_pp(q: int, name: str = "q") -> None:
    if not isinstance(q, int) or q < 2 or is_prime_power(q) is None:
        raise ValueError(f"{name}={q} is not a prime power")


def _proper_divisors(n: int) -> list[int]:
    return [x for x in divisors(n) if x < n]


def satisfies_star(q: int, q_prime: int, d: int) -> bool:
    """Order-d subgroup of GF(q)^x against every proper subgroup of GF(q')^x.

    Each proper divisor e of q'-1 must have d > e or q - d > q' - e.
    """
    _check_pp(q)
    _check_pp(q_prime, "q_prime")
    if d <= 1 or d >= q - 1 or (q - 1) % d:
        raise ValueError(f"{d} is not a proper divisor of {q - 1} other than 1")
    return all(d > e or q - d > q_prime - e for e in _proper_divisors(q_prime - 1))


def _shortcut(q: int, q_prime: int) -> str | None:
    n = q - 1
    if n < 4 or is_prime(n):
        return None
    if q_prime < q:
        return SHORTCUT_SMALLER
    if is_prime(q_prime - 1):
        return SHORTCUT_PRIME_PLUS_ONE
    return None


def criterion_search(q: int, q_prime: int) -> CriterionResult:
    """All subgroup orders d (1 < d < q-1) passing satisfies_star."""
    _check_pp(q)
    _check_pp(q_prime, "q_prime")
    candidates = [d for d in divisors(q - 1) if 1 < d < q - 1]
    valid = tuple(d for d in candidates if satisfies_star(q, q_prime, d))
    tag = _shortcut(q, q_prime)
    if tag is not None and valid != tuple(candidates):
        raise InconsistencyError(f"({q},{q_prime}): shortcut {tag} predicts {candidates}, scan gave {list(valid)}")
    return CriterionResult(q, q_prime, valid, tag)


def omega_sharp_raw(q: int, q_prime: int, d: int) -> Fraction:
    """max over divisors e < d of q'-1 of ((q'-1)/e - ceil((q-d-1)/e)) / (ceil(d/e) - 1) + 1."""
    best = None
    for e in divisors(q_prime - 1):
        if e >= d:
            break
        val = Fraction((q_prime - 1) // e - ceil_div(q - d - 1, e), ceil_div(d, e) - 1) + 1
        if best is None or val > best:
            best = val
    if best is None:
        raise ValueError(f"no divisor of {q_prime - 1} below {d}")
    return best


def omega_sharp_bound(q: int, q_prime: int, d: int, clamp: bool = True) -> int:
    """Smallest integer omega meeting the sharp bound, raised to 3 unless clamp is False."""
    if not satisfies_star(q, q_prime, d):
        raise ValueError(f"order {d} does not satisfy the criterion for ({q},{q_prime})")
    w = math.ceil(omega_sharp_raw(q, q_prime, d))
    return max(3, w) if clamp else w


def omega_weak_raw(q: int, q_prime: int, d: int) -> Fraction:
    below = [e for e in divisors(q_prime - 1) if e < d]
    if not below:
        raise ValueError(f"no divisor of {q_prime - 1} below {d}")
    return Fraction(q_prime - q + d, d - max(below)) + 1


def omega_weak_bound(q: int, q_prime: int, d: int, clamp: bool = True) -> int:
    """(q' - q + d) / (d - e_max) + 1 rounded up, e_max the largest divisor of q'-1 below d."""
    _check_pp(q)
    _check_pp(q_prime, "q_prime")
    w = math.ceil(omega_weak_raw(q, q_prime, d))
    return max(3, w) if clamp else w


def pair_params(q: int, omega: int, d: int) -> NetworkParams:
    return NetworkParams(omega, (d,) * (omega - 1) + (q - d - 1,))


def _verify_pair(params: NetworkParams, q: int, q_prime: int, strict: bool = True) -> bool:
    """Check both verdicts, then q_min = q when the prime-power scan below q is affordable.

    Returns whether the q_min scan ran. Above the scan limit a strict call
    raises CapacityError; otherwise the caller records the pair as unverified.
    """
    if closed_form_divisor(params, q) is None:
        raise InconsistencyError(f"{params} should be solvable over GF({q})")
    if closed_form_divisor(params, q_prime) is not None:
        raise InconsistencyError(f"{params} should not be solvable over GF({q_prime})")
    if q > QMIN_VERIFY_LIMIT:
        if strict:
            raise CapacityError(f"verifying q_min = {q} needs a scan beyond {QMIN_VERIFY_LIMIT}")
        return False
    if not is_q_min(params, q):
        raise InconsistencyError(f"{params} should have q_min = {q}")
    return True


def theorem3_network(q: int, q_prime: int, d: int, strict: bool = True) -> PairDiscovery:
    """Network (omega, (d, ..., d, q-d-1)) solvable over GF(q), not over GF(q'), with q_min = q.

    Every claim is re-checked with the closed form; a failure raises
    InconsistencyError because it can only be a bug. With strict False a q
    too large for the q_min scan yields verified=False instead of an error.
    """
    if not satisfies_star(q, q_prime, d):
        raise ValueError(f"order {d} does not satisfy the criterion for ({q},{q_prime})")
    if q - d - 1 < 2:
        raise ValueError(f"last out-degree q-d-1 = {q - d - 1} is below 2")
    omega = omega_sharp_bound(q, q_prime, d)
    params = pair_params(q, omega, d)
    verified = _verify_pair(params, q, q_prime, strict)
    return PairDiscovery(q, q_prime, d, params, verified)


def theorem4_instance(k: int) -> PairDiscovery:
    """q = 4^k, q' = 2q, d = (q-1)/3 and the tuple (d, ..., d, 2d)."""
    if k < 2:
        raise ValueError(f"need k >= 2, got {k}")
    q = 4**k
    q_prime = 2 * q
    d = (q - 1) // 3
    found = theorem3_network(q, q_prime, d)
    params = found.params
    if params.d[-1] != 2 * d:
        raise InconsistencyError("last out-degree should equal 2d")
    notes = []
    if k == 2:
        notes.append("abstract-consistent, theorem-statement-exceeding")
    qmax = None
    if termination_bound(params) <= QSTAR_SCAN_LIMIT:
        qmax = q_star_max(params)
        pp = is_prime_power(qmax)
        if pp is None or pp.p != 2 or pp.k % 2 == 0 or pp.k < 2 * k + 1:
            raise InconsistencyError(f"q*_max = {qmax} is not 2^(2k'+1) with k' >= {k}")
    return PairDiscovery(q, q_prime, d, params, True, qmax, tuple(notes))


# -- integer-interval search -----------------------------------------------------


def lemma2_search(
    n1: int,
    n2: int,
    c1,
    c2,
    delta,
    count: int,
    max_kprime: int = 100_000,
) -> list[tuple[int, int]]:
    """First ``count`` pairs (k, k') by ascending k' with
    log_{n1}(n2^k') + c1 > k > log_{n1}(n2^k' + delta) + c2.

    Decided exactly: with c = a/b, k - c < log_{n1} x  iff  n1^(kb - a) < x^b.
    Floats only propose candidate k.
    """
    if n1 <= 1 or n2 <= 1:
        raise ValueError("n1 and n2 must exceed 1")
    if math.gcd(n1, n2) != 1:
        raise ValueError(f"{n1} and {n2} are not coprime")
    c1, c2, delta = Fraction(c1), Fraction(c2), Fraction(delta)
    if not c1 > c2:
        raise ValueError("need c1 > c2")
    if count < 1:
        return []
    ratio = math.log(n2) / math.log(n1)
    out: list[tuple[int, int]] = []
    for kp in range(1, max_kprime + 1):
        x = Fraction(n2) ** kp
        y = x + delta
        if y <= 0:
            continue
        lo = math.floor(kp * ratio + float(c2)) - 1
        hi = math.ceil(kp * ratio + float(c1)) + 1
        for k in range(max(1, lo), hi + 1):
            if _below(n1, k, c1, x) and _above(n1, k, c2, y):
                out.append((k, kp))
                if len(out) == count:
                    return out
    return out


def _below(n1: int, k: int, c: Fraction, x: Fraction) -> bool:
    # k - c < log_{n1} x
    a, b = c.numerator, c.denominator
    return Fraction(n1) ** (k * b - a) < x**b


def _above(n1: int, k: int, c: Fraction, y: Fraction) -> bool:
    # k - c > log_{n1} y
    a, b = c.numerator, c.denominator
    return Fraction(n1) ** (k * b - a) > y**b


# -- cross-characteristic search ----------------------------------------------------


@dataclass(frozen=True)
class CrossCharPlan:
    """Base field p^j, divisor d >= 3 of p^j - 1, and exponent step a for the other prime."""

    p: int
    p_prime: int
    j: int
    base: int
    d: int
    a: int

    def to_json(self) -> dict:
        return {"p": self.p, "p_prime": self.p_prime, "j": self.j, "base": self.base, "d": self.d, "a": self.a}


def cross_char_plan(p: int, p_prime: int) -> CrossCharPlan:
    if not (is_prime(p) and is_prime(p_prime)):
        raise ValueError(f"{p} and {p_prime} must both be prime")
    if p == p_prime:
        raise ValueError("the two primes must differ")
    j = 1
    while True:
        base = p**j
        big = [x for x in divisors(base - 1) if x >= 3]
        if big:
            d = big[0]
            break
        j += 1
    a = multiplicative_order(p_prime, d) or 1
    return CrossCharPlan(p, p_prime, j, base, d, a)


def _cross_char_candidates(plan: CrossCharPlan, top: int) -> Iterator[tuple[int, int, int]]:
    q = plan.base
    while q <= top:
        g = (q - 1) // plan.d
        if g >= 2 and q - g - 1 >= 2:
            kp = 1
            while True:
                qq = plan.p_prime ** (plan.a * kp + 1)
                if qq > top:
                    break
                if qq > q:
                    yield q, qq, g
                kp += 1
        q *= plan.base


def discover_cross_char(p: int, p_prime: int, max_bits: int = 64, max_hits: int = 3) -> list[PairDiscovery]:
    """Verified pairs (q, q'') with q = p^(jk) < q'' = p'^(ak'+1), ascending in q then q''.

    The candidate subgroup of GF(q)^x has order (q-1)/d. Hits are checked
    directly against the criterion and then completed and re-verified as
    networks. Hits too large for the q_min scan are reported unverified.
    Factoring trouble raises CapacityError carrying the hits so far.
    """
    plan = cross_char_plan(p, p_prime)
    hits: list[PairDiscovery] = []
    top = 1 << max_bits
    for q, qq, g in _cross_char_candidates(plan, top):
        try:
            if not satisfies_star(q, qq, g):
                continue
            hits.append(theorem3_network(q, qq, g, strict=False))
        except CapacityError as exc:
            raise CapacityError(str(exc), partial=list(hits)) from exc
        if len(hits) >= max_hits:
            break
    return hits
