from __future__ import annotations

import json
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from fieldnet.errors import CapacityError
from fieldnet.netmodel import (
    Network,
    NetworkParams,
    Node,
    build_combination_network,
    build_general_network,
    build_prescribed_qmin_network,
    export,
    from_json,
    max_flow,
    receiver_supports,
    size_stats,
    support_labels,
    table_sizes,
    to_dot,
    to_json,
)

TABLE_Q = [5, 7, 8, 9, 11, 13]


def brute_disjoint_paths(n_nodes, edges, source, sinks) -> int:
    """Largest family of pairwise edge-disjoint source-to-sink paths, by exhaustive search."""
    sinks = set(sinks)
    out = [[] for _ in range(n_nodes)]
    for idx, (t, h) in enumerate(edges):
        out[t].append(idx)
    paths = []

    def walk(v, used):
        if v in sinks:
            paths.append(frozenset(used))
        for e in out[v]:
            walk(edges[e][1], used + [e])

    walk(source, [])
    paths = sorted(set(paths), key=len)
    best = 0

    def pick(i, used, count):
        nonlocal best
        best = max(best, count)
        if count + (len(paths) - i) <= best:
            return
        for j in range(i, len(paths)):
            if not paths[j] & used:
                pick(j + 1, used | paths[j], count + 1)

    pick(0, frozenset(), 0)
    return best


def as_network(n_nodes, edges, source=0) -> Network:
    nodes = tuple(Node(i, 1, f"x{i}") for i in range(n_nodes))
    return Network(1, nodes, tuple(edges), source, ())


@st.composite
def small_dags(draw):
    n = draw(st.integers(2, 8))
    m = draw(st.integers(1, 20))
    edges = []
    for _ in range(m):
        t = draw(st.integers(0, n - 2))
        h = draw(st.integers(t + 1, n - 1))
        edges.append((t, h))
    sinks = draw(st.sets(st.integers(1, n - 1), min_size=1))
    return n, edges, sorted(sinks)


@given(small_dags())
def test_max_flow_matches_path_enumeration(dag):
    n, edges, sinks = dag
    assert max_flow(as_network(n, edges), sinks) == brute_disjoint_paths(n, edges, 0, sinks)


def test_params_validation():
    with pytest.raises(ValueError):
        NetworkParams(2, (2, 2))
    with pytest.raises(ValueError):
        NetworkParams(3, (2, 2))
    with pytest.raises(ValueError):
        NetworkParams(3, (2, 1, 2))


def test_fig2a_network():
    net = build_general_network(NetworkParams(3, (3, 3, 3)))
    layer = lambda L: [n for n in net.nodes if n.layer == L]
    assert [len(layer(L)) for L in (1, 2, 3, 4)] == [1, 3, 3, 9]
    labels = support_labels(net)
    assert frozenset({"n_{1,1}", "n_{1,2}", "n_{1,3}"}) not in labels
    assert frozenset({"n_{1,1}", "n_{2,1}", "n_{3,1}"}) in labels
    # 84 triples minus the 3 inside one v_i
    assert len(net.receivers) == 81
    assert all(len(net.in_edges[t]) == 3 for t in net.receivers)


def test_max_flow_examples():
    net = build_general_network(NetworkParams(3, (3, 3, 3)))
    by = net.node
    assert max_flow(net, [by("n_{1,1}"), by("n_{1,2}"), by("n_{1,3}")]) == 2
    assert max_flow(net, [by("n_{1,1}"), by("n_{2,1}"), by("n_{3,1}")]) == 3
    assert max_flow(net, [by(f"u_{i}") for i in (1, 2, 3)]) == 3
    with pytest.raises(ValueError):
        max_flow(net, [999])
    with pytest.raises(ValueError):
        max_flow(net, [])


@pytest.mark.parametrize("params", [(3, (5, 5, 10)), (4, (2, 2, 2, 4)), (3, (3, 6, 9))])
def test_reference_networks_build(params):
    p = NetworkParams(*params)
    net = build_general_network(p)
    assert len(net.grey) == sum(p.d)
    assert net.params == p


@st.composite
def small_params(draw):
    omega = draw(st.integers(3, 4))
    d = draw(st.lists(st.integers(2, 4), min_size=omega, max_size=omega))
    if sum(d) > 12:
        d = [2] * omega
    return NetworkParams(omega, tuple(d))


@given(small_params())
def test_receivers_are_exactly_full_flow_sets(params):
    net = build_general_network(params)
    supports = set(receiver_supports(net))
    for combo in combinations(net.grey, params.omega):
        full = max_flow(net, combo) == params.omega
        assert full == (frozenset(combo) in supports)
    for t in net.receivers:
        assert max_flow(net, net.parents(t)) == params.omega


def test_graph_invariants():
    for net in (
        build_general_network(NetworkParams(4, (2, 3, 2, 3))),
        build_prescribed_qmin_network(7),
        build_combination_network(5, extended=True),
    ):
        layer = {n.id: n.layer for n in net.nodes}
        assert [n.id for n in net.nodes if n.layer == 1] == [net.source]
        for t, h in net.edges:
            gap = layer[h] - layer[t]
            skips = {"prescribed": (2, 5), "combination-extended": (2, 4)}.get(net.family)
            assert gap == 1 or (layer[t], layer[h]) == skips
        for r in net.receivers:
            assert len(net.in_edges[r]) == net.omega


def test_deterministic_builds():
    a = build_general_network(NetworkParams(3, (2, 3, 4)))
    b = build_general_network(NetworkParams(3, (2, 3, 4)))
    assert a.nodes == b.nodes and a.edges == b.edges and a.receivers == b.receivers


def test_capacity_guard():
    with pytest.raises(CapacityError):
        build_general_network(NetworkParams(4, (5, 5, 5, 5)), max_receivers=100)


def test_prescribed_examples():
    assert len(build_prescribed_qmin_network(5).receivers) == 11
    s = size_stats(build_prescribed_qmin_network(5))
    assert (s.nodes, s.edges) == (23, 47)
    assert (size_stats(build_prescribed_qmin_network(7)).receivers, size_stats(build_prescribed_qmin_network(7)).nodes) == (22, 36)
    assert size_stats(build_prescribed_qmin_network(7)).edges == 82
    for bad in (4, 6, 3):
        with pytest.raises(ValueError):
            build_prescribed_qmin_network(bad)


@pytest.mark.parametrize("q", TABLE_Q)
def test_prescribed_matches_table(q):
    assert size_stats(build_prescribed_qmin_network(q)) == table_sizes(q)["prescribed"]


@pytest.mark.parametrize("q", TABLE_Q)
def test_prescribed_receivers_have_full_flow(q):
    for complete in (False, True):
        net = build_prescribed_qmin_network(q, complete=complete)
        assert all(max_flow(net, net.parents(t)) == 3 for t in net.receivers)
    extra = len(build_prescribed_qmin_network(q, complete=True).receivers) - len(build_prescribed_qmin_network(q).receivers)
    assert extra == q - 2


@pytest.mark.parametrize("q", TABLE_Q)
def test_combination_sizes(q):
    for extended, key in ((False, "combination"), (True, "extended")):
        s = size_stats(build_combination_network(q + 1, extended))
        formula = table_sizes(q)[key]
        assert (s.nodes, s.edges, s.omega) == (formula.nodes, formula.edges, formula.omega)
        # one receiver per pair of middle nodes
        assert s.receivers == (q + 1) * q // 2


def test_combination_examples():
    assert len(build_combination_network(3).receivers) == 3
    assert len(build_combination_network(6).receivers) == 15
    assert len(build_combination_network(4).nodes) == 12
    s = size_stats(build_combination_network(8))
    assert (s.receivers, s.nodes, s.edges) == (28, 38, 66)
    with pytest.raises(ValueError):
        build_combination_network(2)


def test_combination_receivers_full_flow():
    for extended in (False, True):
        net = build_combination_network(5, extended)
        assert all(max_flow(net, net.parents(t)) == net.omega for t in net.receivers)


def test_json_round_trip():
    for net in (
        build_general_network(NetworkParams(3, (3, 3, 3))),
        build_prescribed_qmin_network(7),
        build_combination_network(4, extended=True),
    ):
        text = export(net, "json")
        back = from_json(text)
        assert back == net
        assert back.params == net.params
        assert json.loads(text)["schema"] == 1
        assert from_json(to_json(net)) == net


def test_from_json_rejects_bad_input():
    data = to_json(build_combination_network(3))
    with pytest.raises(ValueError):
        from_json({**data, "schema": 2})
    bad = json.loads(json.dumps(data))
    bad["receivers"][0] = bad["receivers"][0][::-1] + [0]
    with pytest.raises(ValueError):
        from_json(bad)


def test_dot_export():
    net = build_general_network(NetworkParams(3, (3, 3, 3)))
    dot = to_dot(net)
    assert dot.startswith("digraph")
    assert sum(1 for line in dot.splitlines() if line.strip().startswith('"v_1" ->')) == 3
    assert export(net, "dot") == dot
    for fmt in ("", "xml"):
        with pytest.raises(ValueError):
            export(net, fmt)
