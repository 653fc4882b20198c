"""Layered multicast networks: the general family, the prescribed-q_min family,
and (n,2)-combination networks.

A network is an immutable DAG with dense integer node ids. Edges are
(tail, head) pairs and may repeat (multigraph). Labels follow the usual
names: ``s``, ``u_i``, ``v_i``, ``n_{i,j}`` and ``t_k`` for receivers.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

from .arith import is_prime_power
from .errors import CapacityError

RECEIVER_LIMIT = 250_000
SCHEMA = 1


@dataclass(frozen=True)
class NetworkParams:
    omega: int
    d: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "d", tuple(int(x) for x in self.d))
        if self.omega < 3:
            raise ValueError(f"source dimension must be >= 3, got {self.omega}")
        if len(self.d) != self.omega:
            raise ValueError(f"need {self.omega} out-degrees, got {len(self.d)}")
        if any(x < 2 for x in self.d):
            raise ValueError(f"every out-degree must be >= 2, got {self.d}")

    def to_json(self) -> dict:
        return {"omega": self.omega, "d": list(self.d)}


@dataclass(frozen=True)
class Node:
    id: int
    layer: int
    label: str


@dataclass(frozen=True)
class SizeStats:
    receivers: int
    nodes: int
    edges: int
    omega: int

    def to_json(self) -> dict:
        return {"receivers": self.receivers, "nodes": self.nodes, "edges": self.edges, "omega": self.omega}


@dataclass(frozen=True)
class Network:
    omega: int
    nodes: tuple[Node, ...]
    edges: tuple[tuple[int, int], ...]
    source: int
    receivers: tuple[int, ...]
    grey: tuple[int, ...] = ()
    family: str = "custom"
    params: NetworkParams | None = field(default=None, compare=False)

    @cached_property
    def in_edges(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in self.nodes]
        for idx, (_, h) in enumerate(self.edges):
            out[h].append(idx)
        return out

    @cached_property
    def out_edges(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in self.nodes]
        for idx, (t, _) in enumerate(self.edges):
            out[t].append(idx)
        return out

    @cached_property
    def by_label(self) -> dict[str, int]:
        return {n.label: n.id for n in self.nodes}

    def node(self, label: str) -> int:
        try:
            return self.by_label[label]
        except KeyError:
            raise ValueError(f"no node labelled {label!r}") from None

    def parents(self, v: int) -> list[int]:
        return [self.edges[e][0] for e in self.in_edges[v]]

    @cached_property
    def topo_edges(self) -> list[int]:
        """Edge indices ordered by tail layer, then index; a valid topological order."""
        return sorted(range(len(self.edges)), key=lambda e: (self.nodes[self.edges[e][0]].layer, e))


class _Builder:
    def __init__(self):
        self.nodes: list[Node] = []
        self.edges: list[tuple[int, int]] = []

    def add(self, layer: int, label: str) -> int:
        self.nodes.append(Node(len(self.nodes), layer, label))
        return len(self.nodes) - 1

    def link(self, tail: int, head: int) -> None:
        self.edges.append((tail, head))


# -- max flow -----------------------------------------------------------------


def _max_flow_edges(n_nodes: int, edges: Sequence[tuple[int, int]], source: int, sinks: Iterable[int], cap: int | None = None) -> int:
    sink = n_nodes  # super-sink
    # residual graph on edge slots: forward slot 2i, backward slot 2i+1
    heads: list[int] = []
    capacity: list[int] = []
    adj: list[list[int]] = [[] for _ in range(n_nodes + 1)]

    def arc(a: int, b: int, c: int) -> None:
        adj[a].append(len(heads))
        heads.append(b)
        capacity.append(c)
        adj[b].append(len(heads))
        heads.append(a)
        capacity.append(0)

    for t, h in edges:
        arc(t, h, 1)
    big = len(edges) + 1
    for v in set(sinks):
        arc(v, sink, big)
    limit = sum(1 for t, _ in edges if t == source)
    if cap is not None:
        limit = min(limit, cap)

    flow = 0
    while flow < limit:
        prev = [-1] * (n_nodes + 1)
        prev[source] = -2
        queue = deque([source])
        while queue and prev[sink] == -1:
            v = queue.popleft()
            for slot in adj[v]:
                w = heads[slot]
                if capacity[slot] > 0 and prev[w] == -1:
                    prev[w] = slot
                    queue.append(w)
        if prev[sink] == -1:
            break
        v = sink
        while v != source:
            slot = prev[v]
            capacity[slot] -= 1
            capacity[slot ^ 1] += 1
            v = heads[slot ^ 1]
        flow += 1
    return flow


def max_flow(net: Network, sinks: Iterable[int]) -> int:
    """Number of edge-disjoint paths from the source ending anywhere in ``sinks``."""
    sinks = list(sinks)
    if not sinks:
        raise ValueError("need at least one sink")
    for v in sinks:
        if not 0 <= v < len(net.nodes):
            raise ValueError(f"unknown node id {v}")
    return _max_flow_edges(len(net.nodes), net.edges, net.source, sinks)


# -- builders -------------------------------------------------------------------


def _upper_layers(omega: int, d: Sequence[int], feeds: Sequence[tuple[int, int]]):
    """Layers 1-4: source, u_i, v_i (fed by the given u pairs, 1-based), n_{i,j}."""
    b = _Builder()
    s = b.add(1, "s")
    us = [b.add(2, f"u_{i}") for i in range(1, omega + 1)]
    for u in us:
        b.link(s, u)
    vs = [b.add(3, f"v_{i}") for i in range(1, omega + 1)]
    for v, (a, c) in zip(vs, feeds):
        b.link(us[a - 1], v)
        b.link(us[c - 1], v)
    grey = []
    for i, (v, di) in enumerate(zip(vs, d), start=1):
        for j in range(1, di + 1):
            n = b.add(4, f"n_{{{i},{j}}}")
            b.link(v, n)
            grey.append(n)
    return b, s, us, vs, grey


def build_general_network(params: NetworkParams, max_receivers: int = RECEIVER_LIMIT) -> Network:
    """Five-layer network with one receiver per omega-set of grey nodes of full max-flow.

    v_i is fed by u_{i-1} and u_i (u_0 = u_omega). Receivers follow the
    lexicographic order of omega-subsets of the grey nodes n_{1,1}, n_{1,2}, ...
    """
    if not isinstance(params, NetworkParams):
        raise ValueError("expected NetworkParams")
    omega, d = params.omega, params.d
    total = sum(d)
    if comb(total, omega) > 50 * max_receivers:
        raise CapacityError(f"C({total},{omega}) candidate receiver sets exceed the budget")
    feeds = [(omega if i == 1 else i - 1, i) for i in range(1, omega + 1)]
    b, s, us, vs, grey = _upper_layers(omega, d, feeds)
    owner = []
    for i, di in enumerate(d):
        owner.extend([i] * di)

    upper_nodes = len(b.nodes)
    upper_edges = list(b.edges)
    # siblings under one v_i are interchangeable, so max-flow depends only on
    # how many chosen nodes sit under each v_i
    verdict: dict[tuple[int, ...], bool] = {}
    supports = []
    for combo in combinations(range(total), omega):
        profile = [0] * omega
        for g in combo:
            profile[owner[g]] += 1
        key = tuple(profile)
        ok = verdict.get(key)
        if ok is None:
            ok = _max_flow_edges(upper_nodes, upper_edges, s, [grey[g] for g in combo], cap=omega) == omega
            verdict[key] = ok
        if ok:
            supports.append(combo)
            if len(supports) > max_receivers:
                raise CapacityError(f"more than {max_receivers} receivers")
    receivers = []
    for k, combo in enumerate(supports, start=1):
        t = b.add(5, f"t_{k}")
        for g in combo:
            b.link(grey[g], t)
        receivers.append(t)
    return Network(omega, tuple(b.nodes), tuple(b.edges), s, tuple(receivers), tuple(grey), "general", params)


def build_prescribed_qmin_network(q: int, complete: bool = False) -> Network:
    """The three-dimensional network whose receiver count is q^2/2 - q/2 + 1.

    Upper layers: v_1 <- u_1,u_2; v_2 <- u_2,u_3; v_3 <- u_3,u_1 with children
    n_{1,1}, n_{2,1} and n_{3,1..q-2}. Receivers, in order:
    {n_{1,1},u_2,u_3}, {n_{2,1},u_1,u_2}; {n_{3,j},u_2,u_3} for every j;
    {n_{1,1},n_{3,1},n_{3,j}} for j > 1; {n_{2,1},n_{3,i},n_{3,j}} for 1 < i < j;
    {n_{1,1},n_{2,1},n_{3,j}} for every j.
    ``complete=True`` also adds {n_{3,j},u_1,u_2} after each {n_{3,j},u_2,u_3}.

    Only the complete receiver list pins the minimum field size to q. The
    default list, sized q^2/2 - q/2 + 1, is already solvable over GF(4) for
    q = 5 and over GF(7) for q = 8 (exhaustive search over all codes).
    """
    if q < 5 or is_prime_power(q) is None:
        raise ValueError(f"need a prime power q >= 5, got {q}")
    m = q - 2
    b, s, us, vs, grey = _upper_layers(3, (1, 1, m), [(1, 2), (2, 3), (3, 1)])
    u1, u2, u3 = us
    n11, n21, n3 = grey[0], grey[1], grey[2:]
    supports: list[tuple[int, ...]] = [(n11, u2, u3), (n21, u1, u2)]
    for x in n3:
        supports.append((x, u2, u3))
        if complete:
            supports.append((x, u1, u2))
    for j in range(1, m):
        supports.append((n11, n3[0], n3[j]))
    for i, j in combinations(range(1, m), 2):
        supports.append((n21, n3[i], n3[j]))
    for x in n3:
        supports.append((n11, n21, x))
    receivers = []
    for k, sup in enumerate(supports, start=1):
        t = b.add(5, f"t_{k}")
        for v in sup:
            b.link(v, t)
        receivers.append(t)
    family = "prescribed-complete" if complete else "prescribed"
    return Network(3, tuple(b.nodes), tuple(b.edges), s, tuple(receivers), tuple(grey), family)


def build_combination_network(n: int, extended: bool = False) -> Network:
    """(n,2)-combination network: s => w (two parallel edges) -> c_1..c_n -> one receiver per pair.

    ``extended`` raises the source dimension to 3 with one more node z fed by
    the source and feeding every receiver.
    """
    if n < 3:
        raise ValueError(f"combination network needs n >= 3, got {n}")
    b = _Builder()
    s = b.add(1, "s")
    w = b.add(2, "w")
    b.link(s, w)
    b.link(s, w)
    z = None
    if extended:
        z = b.add(2, "z")
        b.link(s, z)
    mids = [b.add(3, f"c_{i}") for i in range(1, n + 1)]
    for c in mids:
        b.link(w, c)
    receivers = []
    for k, (x, y) in enumerate(combinations(mids, 2), start=1):
        t = b.add(4, f"t_{k}")
        b.link(x, t)
        b.link(y, t)
        if z is not None:
            b.link(z, t)
        receivers.append(t)
    omega = 3 if extended else 2
    family = "combination-extended" if extended else "combination"
    return Network(omega, tuple(b.nodes), tuple(b.edges), s, tuple(receivers), tuple(mids), family)


# -- inspection -----------------------------------------------------------------


def receiver_supports(net: Network) -> list[frozenset[int]]:
    return [frozenset(net.parents(t)) for t in net.receivers]


def support_labels(net: Network) -> list[frozenset[str]]:
    return [frozenset(net.nodes[v].label for v in sup) for sup in receiver_supports(net)]


def size_stats(net: Network) -> SizeStats:
    return SizeStats(len(net.receivers), len(net.nodes), len(net.edges), net.omega)


def table_sizes(q: int) -> dict[str, SizeStats]:
    """Closed-form sizes of the three networks with minimum field size q.

    Keys: ``prescribed``, ``combination``, ``extended``. Every formula is
    integral because q^2 - q and q^2 + q are even.
    """
    return {
        "prescribed": SizeStats((q * q - q) // 2 + 1, (q * q + q) // 2 + 8, (3 * q * q - q) // 2 + 12, 3),
        "combination": SizeStats((q * q + q) // 2 + 1, (q * q + 3 * q) // 2 + 3, q * q + 2 * q + 3, 2),
        "extended": SizeStats((q * q + q) // 2 + 1, (q * q + 3 * q) // 2 + 4, (3 * q * q + 5 * q) // 2 + 4, 3),
    }


# -- export / import ------------------------------------------------------------


def _layers(net: Network) -> list[list[Node]]:
    top = max(n.layer for n in net.nodes)
    return [[n for n in net.nodes if n.layer == L] for L in range(1, top + 1)]


def to_json(net: Network) -> dict:
    out = {
        "schema": SCHEMA,
        "omega": net.omega,
        "family": net.family,
        "source": net.source,
        "layers": [[{"id": n.id, "label": n.label} for n in layer] for layer in _layers(net)],
        "edges": [[t, h] for t, h in net.edges],
        "grey": list(net.grey),
        "receiver_ids": list(net.receivers),
        "receivers": [net.parents(t) for t in net.receivers],
    }
    if net.params is not None:
        out["params"] = net.params.to_json()
    return out


def from_json(data: dict | str) -> Network:
    if isinstance(data, str):
        data = json.loads(data)
    if data.get("schema") != SCHEMA:
        raise ValueError(f"unsupported network schema {data.get('schema')!r}")
    nodes = sorted(
        (Node(item["id"], layer, item["label"]) for layer, items in enumerate(data["layers"], start=1) for item in items),
        key=lambda n: n.id,
    )
    if [n.id for n in nodes] != list(range(len(nodes))):
        raise ValueError("node ids must be dense 0..N-1")
    params = None
    if "params" in data:
        params = NetworkParams(data["params"]["omega"], tuple(data["params"]["d"]))
    net = Network(
        data["omega"],
        tuple(nodes),
        tuple((t, h) for t, h in data["edges"]),
        data["source"],
        tuple(data["receiver_ids"]),
        tuple(data["grey"]),
        data["family"],
        params,
    )
    if [net.parents(t) for t in net.receivers] != [list(p) for p in data["receivers"]]:
        raise ValueError("receiver parent lists disagree with the edge list")
    return net


def _dot_id(label: str) -> str:
    return '"' + label.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(net: Network) -> str:
    lines = [f"digraph {_dot_id(net.family)} {{", "  rankdir=TB;"]
    grey = set(net.grey)
    for L, layer in enumerate(_layers(net), start=1):
        lines.append(f"  subgraph layer{L} {{")
        lines.append("    rank=same;")
        for n in layer:
            style = " [style=filled, fillcolor=grey80]" if n.id in grey else ""
            lines.append(f"    {_dot_id(n.label)}{style};")
        lines.append("  }")
    for t, h in net.edges:
        lines.append(f"  {_dot_id(net.nodes[t].label)} -> {_dot_id(net.nodes[h].label)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export(net: Network, fmt: str) -> str:
    if fmt == "dot":
        return to_dot(net)
    if fmt == "json":
        return json.dumps(to_json(net), sort_keys=True)
    raise ValueError(f"unknown export format {fmt!r}; expected 'dot' or 'json'")
