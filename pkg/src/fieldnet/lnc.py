"""Linear network codes over GF(q): propagation, verification and synthesis.

A code assigns a coefficient to every adjacent edge pair (d, e), with d
entering the node that e leaves. Source out-edges carry the unit vectors
e_1, e_2, ... in edge order. Every receiver must see a full-rank matrix.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

import numpy as np

from .gf import FiniteField, construct_field
from .netmodel import Network, NetworkParams, build_combination_network, build_general_network
from .solvability import closed_form_divisor
from .zn import coset_union_sets, sumset

_BATCH_FIELD_LIMIT = 256
REFUTATION_SAMPLES = 1000


@dataclass(frozen=True)
class LinearCode:
    field: FiniteField
    coefficients: dict = field(default_factory=dict)  # (edge d, edge e) -> element

    def get(self, d: int, e: int) -> int:
        return self.coefficients.get((d, e), 0)


@dataclass(frozen=True)
class CodingVectors:
    field: FiniteField
    vectors: tuple  # per edge index, a tuple of omega field elements

    def __getitem__(self, e: int) -> tuple:
        return self.vectors[e]


@dataclass(frozen=True)
class SolutionReport:
    ok: bool
    ranks: tuple  # per receiver, in net.receivers order
    failing: tuple  # receiver node ids whose rank is below omega

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class SolutionWitness:
    """Sets S_i of distinct nonzero elements with S_i = {xi^t : t in T_i}."""

    field: FiniteField
    T: tuple  # tuple of sorted tuples of exponents
    S: tuple  # tuple of tuples of field elements, S[i][j] = xi^T[i][j]
    divisor: int | None = None
    shift: int = 0

    def to_json(self) -> dict:
        return {"q": self.field.q, "xi": self.field.xi, "T": [list(t) for t in self.T], "S": [list(s) for s in self.S]}

    def matrix(self) -> list[list[int]]:
        """The omega x sum(d_i) matrix of grey coding vectors induced by sets_to_code."""
        F = self.field
        omega = len(self.S)
        cols = []
        for i, values in enumerate(self.S):
            for a in values:
                col = [0] * omega
                col[(i - 1) % omega] = _wrap_sign(F, i)
                col[i] = a
                cols.append(col)
        return [[c[r] for c in cols] for r in range(omega)]


def _wrap_sign(F: FiniteField, i: int) -> int:
    # -1 on the u_omega -> v_1 wrap edge puts the receiver determinant in the
    # form prod(a) - (-1)^(omega-1)
    return F.neg(1) if i == 0 else 1


# -- propagation and rank -----------------------------------------------------


def compute_coding_vectors(net: Network, code: LinearCode) -> CodingVectors:
    F = code.field
    omega = net.omega
    vecs: list = [None] * len(net.edges)
    unit = 0
    for e in net.out_edges[net.source]:
        v = [0] * omega
        if unit < omega:
            v[unit] = 1
        vecs[e] = tuple(v)
        unit += 1
    for e in net.topo_edges:
        tail = net.edges[e][0]
        if tail == net.source:
            continue
        acc = [0] * omega
        for d in net.in_edges[tail]:
            k = code.get(d, e)
            if k:
                fd = vecs[d]
                for r in range(omega):
                    if fd[r]:
                        acc[r] = F.add(acc[r], F.mul(k, fd[r]))
        vecs[e] = tuple(acc)
    return CodingVectors(F, tuple(vecs))


def rank(F: FiniteField, matrix: Sequence[Sequence[int]]) -> int:
    """Row rank over F by Gaussian elimination."""
    rows = [list(r) for r in matrix]
    if not rows:
        return 0
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError("ragged matrix")
    for r in rows:
        for x in r:
            if not 0 <= x < F.q:
                raise ValueError(f"{x} is not an element of GF({F.q})")
    rk = 0
    for c in range(width):
        piv = next((i for i in range(rk, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        inv = F.inv(rows[rk][c])
        for i in range(rk + 1, len(rows)):
            if rows[i][c]:
                f = F.mul(rows[i][c], inv)
                rows[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(rows[i], rows[rk])]
        rk += 1
        if rk == len(rows):
            break
    return rk


class _Tables:
    """Dense add/mul tables as numpy arrays, for batched elimination."""

    def __init__(self, F: FiniteField):
        q = F.q
        log = np.array(F.log_table, dtype=np.int64)
        exp = np.array(F.exp_table, dtype=np.int64)
        a = np.arange(q)
        mul = exp[(log[:, None] + log[None, :]) % (q - 1)]
        mul[0, :] = 0
        mul[:, 0] = 0
        self.mul = mul
        self.add = np.array([[F.add(x, y) for y in range(q)] for x in range(q)], dtype=np.int64)
        self.neg = np.array([F.neg(x) for x in a], dtype=np.int64)
        self.inv = np.array([0] + [F.inv(x) for x in range(1, q)], dtype=np.int64)


_TABLES: dict[int, _Tables] = {}


def _tables(F: FiniteField) -> _Tables:
    t = _TABLES.get(F.q)
    if t is None:
        t = _TABLES[F.q] = _Tables(F)
    return t


def _full_rank_batch(F: FiniteField, mats: np.ndarray) -> np.ndarray:
    """For a stack of square matrices (R, w, w), which ones are invertible."""
    T = _tables(F)
    A = mats.copy()
    R, w, _ = A.shape
    singular = np.zeros(R, dtype=bool)
    idx = np.arange(R)
    for c in range(w):
        nz = A[:, c:, c] != 0
        singular |= ~nz.any(axis=1)
        piv = nz.argmax(axis=1) + c
        top = A[idx, c].copy()
        A[idx, c] = A[idx, piv]
        A[idx, piv] = top
        inv = T.inv[A[:, c, c]]
        for r in range(c + 1, w):
            f = T.mul[A[:, r, c], inv]
            A[:, r, :] = T.add[A[:, r, :], T.neg[T.mul[f[:, None], A[:, c, :]]]]
    return ~singular


def receiver_matrix(net: Network, vecs: CodingVectors, t: int) -> list[list[int]]:
    cols = [vecs[e] for e in net.in_edges[t]]
    return [[c[r] for c in cols] for r in range(net.omega)]


def is_solution(net: Network, code: LinearCode) -> SolutionReport:
    """Every receiver's incoming coding vectors must have rank omega."""
    F = code.field
    vecs = compute_coding_vectors(net, code)
    omega = net.omega
    ranks: list[int] = [0] * len(net.receivers)
    square = [k for k, t in enumerate(net.receivers) if len(net.in_edges[t]) == omega]
    if square and F.q <= _BATCH_FIELD_LIMIT:
        mats = np.array(
            [[[vecs[e][r] for e in net.in_edges[net.receivers[k]]] for r in range(omega)] for k in square],
            dtype=np.int64,
        )
        full = _full_rank_batch(F, mats)
        for k, ok in zip(square, full):
            ranks[k] = omega if ok else rank(F, mats[k].tolist())
        done = set(square)
        rest = [k for k in range(len(net.receivers)) if k not in done]
    else:
        rest = range(len(net.receivers))
    for k in rest:
        ranks[k] = rank(F, receiver_matrix(net, vecs, net.receivers[k]))
    failing = tuple(t for t, r in zip(net.receivers, ranks) if r < omega)
    return SolutionReport(not failing, tuple(ranks), failing)


# -- codes from value assignments ----------------------------------------------


def _relay_ones(net: Network, coeffs: dict) -> None:
    # unit coefficients through every node with a single in-edge
    for v in range(len(net.nodes)):
        ins = net.in_edges[v]
        if v == net.source or len(ins) != 1:
            continue
        for e in net.out_edges[v]:
            coeffs[(ins[0], e)] = 1


def code_from_values(net: Network, F: FiniteField, values: Sequence[Sequence[int]]) -> LinearCode:
    """Code on a general network putting values[i][j] on the u_i -> v_i -> n_{i,j} pair.

    No validation of the values: duplicates or zeros are allowed, which is
    what tests of failing receivers need.
    """
    if net.family != "general" or net.params is None:
        raise ValueError("code_from_values needs a network from build_general_network")
    omega = net.omega
    if [len(v) for v in values] != list(net.params.d):
        raise ValueError(f"value counts {[len(v) for v in values]} do not match {net.params.d}")
    coeffs: dict = {}
    _relay_ones(net, coeffs)
    for i in range(omega):
        v = net.node(f"v_{i + 1}")
        low, own = net.in_edges[v]  # from u_{i-1} (u_omega for i = 1), then u_i
        for j, e in enumerate(net.out_edges[v]):
            coeffs[(low, e)] = _wrap_sign(F, i)
            coeffs[(own, e)] = values[i][j]
    return LinearCode(F, coeffs)


def sets_to_code(params: NetworkParams, witness: SolutionWitness, net: Network | None = None) -> LinearCode:
    if [len(s) for s in witness.S] != list(params.d):
        raise ValueError(f"set sizes {[len(s) for s in witness.S]} do not match {params.d}")
    for s in witness.S:
        if len(set(s)) != len(s) or 0 in s:
            raise ValueError("each set needs distinct nonzero elements")
    if net is None:
        net = build_general_network(params)
    elif net.params != params:
        raise ValueError("network was built from different parameters")
    return code_from_values(net, witness.field, witness.S)


def product_condition(F: FiniteField, sets: Sequence[Sequence[int]]) -> bool:
    """True iff (-1)^(omega-1) is not a product with one factor from each set."""
    target = F.neg(1) if (len(sets) - 1) % 2 else 1
    products = {1}
    for s in sets:
        products = {F.mul(p, a) for p in products for a in s}
    return target not in products


# -- synthesis -----------------------------------------------------------------


def target_exponent(omega: int, q: int) -> int:
    """Exponent t with xi^t = (-1)^(omega-1)."""
    if q % 2 == 0:
        return 0
    return (omega - 1) * (q - 1) // 2 % (q - 1)


def construct_solution(params: NetworkParams, q: int) -> SolutionWitness | None:
    F = construct_field(q)
    d = closed_form_divisor(params, q)
    if d is None:
        return None
    n = q - 1
    sets = coset_union_sets(n, d, params.d)
    total = sets[0]
    for s in sets[1:]:
        total = sumset(total, s)
    t = target_exponent(params.omega, q)
    delta = 0
    if t in total:
        # the sum is a proper subset, so some shift moves it off t
        delta = next(x for x in range(1, n) if (t - x) % n not in total)
        sets[0] = sets[0].shift(delta)
    T = tuple(tuple(sorted(s)) for s in sets)
    S = tuple(tuple(F.exp(x) for x in ts) for ts in T)
    return SolutionWitness(F, T, S, d, delta)


# -- combination networks -------------------------------------------------------


@dataclass(frozen=True)
class CombinationSolution:
    vectors: tuple  # one 2-vector per layer-3 node
    code: LinearCode
    network: Network


def projective_points(F: FiniteField) -> list[tuple[int, int]]:
    return [(1, 0), (0, 1)] + [(1, a) for a in range(1, F.q)]


def solve_combination(n: int, q: int, extended: bool = False) -> CombinationSolution | None:
    """Distinct projective points on the n middle nodes, or None when q + 1 < n."""
    F = construct_field(q)
    net = build_combination_network(n, extended)
    points = projective_points(F)
    if n > len(points):
        return None
    chosen = points[:n]
    coeffs: dict = {}
    _relay_ones(net, coeffs)
    w = net.node("w")
    ins = net.in_edges[w]
    for e, vec in zip(net.out_edges[w], chosen):
        for d, x in zip(ins, vec):
            coeffs[(d, e)] = x
    return CombinationSolution(tuple(chosen), LinearCode(F, coeffs), net)


# -- exhaustive and randomized search -------------------------------------------


def _span_points(F: FiniteField, basis: Sequence[tuple]) -> list[tuple]:
    seen = {}
    for coeffs in product(range(F.q), repeat=len(basis)):
        v = [0] * len(basis[0])
        for c, b in zip(coeffs, basis):
            if c:
                v = [F.add(x, F.mul(c, y)) for x, y in zip(v, b)]
        lead = next((x for x in v if x), 0)
        if not lead:
            continue
        inv = F.inv(lead)
        key = tuple(F.mul(inv, x) for x in v)
        seen.setdefault(key, None)
    return sorted(seen)


def exhaustive_solvable(net: Network, F: FiniteField, interchangeable_siblings: bool = False) -> dict | None:
    """Search every linear code up to scaling; return an edge -> vector map of a solution or None.

    Supported shape: the only mixing nodes (in-degree >= 2) have in-edges whose
    vectors are fixed, which holds for every network built in this package.
    Scaling an edge vector never changes a rank, and a zero vector never helps,
    so each mixing out-edge ranges over the projective points of its span.
    ``interchangeable_siblings`` assumes out-edges of one mixing node are
    symmetric and only tries non-decreasing point sequences along them.
    """
    omega = net.omega
    fixed: dict[int, tuple] = {}
    free: list[int] = []
    origin: dict[int, int] = {}
    unit = 0
    for e in net.out_edges[net.source]:
        v = [0] * omega
        if unit < omega:
            v[unit] = 1
        unit += 1
        fixed[e] = tuple(v)
        origin[e] = e
    for e in net.topo_edges:
        tail = net.edges[e][0]
        if tail == net.source:
            continue
        ins = net.in_edges[tail]
        if len(ins) == 1:
            origin[e] = origin[ins[0]]
            continue
        if any(origin[d] not in fixed for d in ins):
            raise ValueError("exhaustive_solvable: nested mixing nodes are not supported")
        origin[e] = e
        free.append(e)
    spans = {e: _span_points(F, [fixed[origin[d]] for d in net.in_edges[net.edges[e][0]]]) for e in free}

    position = {e: k for k, e in enumerate(free)}
    checks: list[list] = [[] for _ in free]
    for t in net.receivers:
        srcs = [origin[e] for e in net.in_edges[t]]
        last = max((position[s] for s in srcs if s in position), default=-1)
        if last < 0:
            if rank(F, [[fixed[s][r] for s in srcs] for r in range(omega)]) < omega:
                return None
            continue
        checks[last].append(srcs)

    chosen: dict[int, tuple] = dict(fixed)
    index: dict[int, int] = {}

    def ok(k: int) -> bool:
        for srcs in checks[k]:
            if rank(F, [[chosen[s][r] for s in srcs] for r in range(omega)]) < omega:
                return False
        return True

    def go(k: int) -> bool:
        if k == len(free):
            return True
        e = free[k]
        start = 0
        if interchangeable_siblings and k and net.edges[free[k - 1]][0] == net.edges[e][0]:
            start = index[free[k - 1]]
        pts = spans[e]
        for i in range(start, len(pts)):
            chosen[e] = pts[i]
            index[e] = i
            if ok(k) and go(k + 1):
                return True
        del chosen[e]
        return False

    if not go(0):
        return None
    return {e: chosen[e] for e in free}


def random_code(net: Network, F: FiniteField, rng: random.Random) -> LinearCode:
    coeffs = {}
    for v in range(len(net.nodes)):
        if v == net.source:
            continue
        for d in net.in_edges[v]:
            for e in net.out_edges[v]:
                coeffs[(d, e)] = rng.randrange(F.q)
    return LinearCode(F, coeffs)


def random_refutation(net: Network, F: FiniteField, samples: int = REFUTATION_SAMPLES, seed: int = 0) -> LinearCode | None:
    """Try random codes; return the first solution found, else None.

    Finding nothing is evidence of unsolvability, not a proof.
    """
    rng = random.Random(seed)
    for _ in range(samples):
        code = random_code(net, F, rng)
        if is_solution(net, code):
            return code
    return None
