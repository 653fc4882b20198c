"""Deciding linear solvability of the general network over GF(q).

The closed form scans the divisors d of q-1: the network is solvable over
GF(q) exactly when some d gives q >= d (sum ceil(d_i/d) - omega + 1) + 2.
The brute-force route instead asks whether sets T_i in Z_{q-1} of sizes d_i
can have a sum smaller than all of Z_{q-1}.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

from .arith import ceil_div, divisors, is_prime, is_prime_power, prime_powers, prime_powers_desc
from .errors import CapacityError
from .netmodel import NetworkParams
from .zn import brute_min_sumset, oracle_limit


@dataclass(frozen=True)
class SolvabilityReport:
    params: NetworkParams
    q: int
    solvable: bool
    witness_divisor: int | None = None
    refutation: tuple | None = None  # ((d, required q), ...) over every divisor d of q-1

    def to_json(self) -> dict:
        out = {
            "schema": 1,
            "omega": self.params.omega,
            "d": list(self.params.d),
            "q": self.q,
            "solvable": self.solvable,
            "witness_divisor": self.witness_divisor,
        }
        if self.refutation is not None:
            out["refutation"] = [{"divisor": d, "required_q": lhs} for d, lhs in self.refutation]
        return out


@dataclass(frozen=True)
class FieldRange:
    q_min: int
    q_star_max: int

    def to_json(self) -> dict:
        return {"schema": 1, "q_min": self.q_min, "q_star_max": self.q_star_max}


def _check_q(q: int) -> None:
    if not isinstance(q, int) or q < 2 or is_prime_power(q) is None:
        raise ValueError(f"{q} is not a prime power")


def _check_params(params) -> None:
    if not isinstance(params, NetworkParams):
        raise ValueError("expected NetworkParams")


def required_q(params: NetworkParams, d: int) -> int:
    """d (sum ceil(d_i/d) - omega + 1) + 2: the least field size the order-d subgroup can serve."""
    return d * (sum(ceil_div(x, d) for x in params.d) - params.omega + 1) + 2


def closed_form_divisor(params: NetworkParams, q: int) -> int | None:
    """Smallest divisor d of q-1 with required_q(params, d) <= q, or None."""
    _check_params(params)
    _check_q(q)
    for d in divisors(q - 1):
        if required_q(params, d) <= q:
            return d
    return None


def solvable_closed_form(params: NetworkParams, q: int) -> SolvabilityReport:
    d = closed_form_divisor(params, q)
    if d is not None:
        return SolvabilityReport(params, q, True, d)
    refutation = tuple((d, required_q(params, d)) for d in divisors(q - 1))
    return SolvabilityReport(params, q, False, None, refutation)


def brute_force_solvable(params: NetworkParams, q: int, limit: int | None = None) -> bool:
    """Solvable iff the smallest sum of sets of sizes d_i misses part of Z_{q-1}.

    Uses only the exhaustive sumset oracle, no divisor reasoning.
    """
    _check_params(params)
    _check_q(q)
    n = q - 1
    limit = oracle_limit() if limit is None else limit
    if n > limit:
        raise CapacityError(f"brute-force solvability limited to q-1 <= {limit}, got q={q}")
    if max(params.d) > n:
        return False  # not enough distinct nonzero elements
    return brute_min_sumset(n, params.d, limit=limit) < n


def termination_bound(params: NetworkParams) -> int:
    """Every q above this is solvable, via d = 1."""
    return sum(params.d) - params.omega + 2


def q_min(params: NetworkParams) -> int:
    _check_params(params)
    for q in prime_powers(2):
        if closed_form_divisor(params, q) is not None:
            return q
    raise AssertionError("unreachable: large q is always solvable")


def q_star_max(params: NetworkParams) -> int:
    """Largest unsolvable prime power, or 1 if there is none."""
    _check_params(params)
    for q in prime_powers_desc(termination_bound(params)):
        if closed_form_divisor(params, q) is None:
            return q
    return 1


def field_range(params: NetworkParams) -> FieldRange:
    return FieldRange(q_min(params), q_star_max(params))


def is_q_min(params: NetworkParams, q: int) -> bool:
    """q is solvable and no smaller prime power is."""
    if closed_form_divisor(params, q) is None:
        return False
    return all(closed_form_divisor(params, q0) is None for q0 in prime_powers(2, q))


def check_odd_char_monotonicity(params: NetworkParams, p: int, k_range: Iterable[int]) -> bool:
    """Once solvable over GF(p^k) for some k in range, solvable for every larger k in range."""
    _check_params(params)
    if p == 2 or not is_prime(p):
        raise ValueError(f"need an odd prime, got {p}")
    seen_solvable = False
    for k in sorted(k_range):
        ok = closed_form_divisor(params, p**k) is not None
        if seen_solvable and not ok:
            return False
        seen_solvable = seen_solvable or ok
    return True


def _scan_one(args) -> SolvabilityReport:
    params, q = args
    return solvable_closed_form(params, q)


def scan(params: NetworkParams, qs: Sequence[int], jobs: int = 1) -> list[SolvabilityReport]:
    """Closed-form reports for each q, in input order; ``jobs > 1`` spreads the work over processes."""
    tasks = [(params, q) for q in qs]
    if jobs <= 1 or len(tasks) < 2:
        return [_scan_one(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_scan_one, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
