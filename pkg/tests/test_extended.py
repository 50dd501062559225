"""Extended graph construction, checked against a direct reading of the rules."""

from math import comb

import pytest
from hypothesis import given, settings

from dcmulticast import (
    ExtNode,
    Network,
    build_extended_graph,
    induced_satellite_subgraph,
    satellite_coverage,
)

from checks import rule_edges
from conftest import networks

lam = ExtNode


def test_two_node_example(two_node):
    g = build_extended_graph(two_node)
    assert set(g.ids) == {lam(0), lam(1), lam(0, 2), lam(1, 1)}
    assert set(g.edges()) == {
        (lam(0), lam(0, 2)),
        (lam(1), lam(1, 1)),
        (lam(0, 2), lam(1, 1)),
        (lam(0, 2), lam(1)),
        (lam(0), lam(1, 1)),
    }
    assert g.n_nodes == 4 and g.n_edges == 5


def test_dump_is_golden(two_node):
    assert build_extended_graph(two_node).dump() == (
        "0 -- λ(0,2)\n"
        "0 -- λ(1,1)\n"
        "λ(0,2) -- 1\n"
        "λ(0,2) -- λ(1,1)\n"
        "1 -- λ(1,1)\n"
    )


def test_isolated_node_has_no_satellites():
    net = Network([0, 1, 2], [(0, 1)], 3, {0: {1}, 1: {2}, 2: {3}})
    g = build_extended_graph(net)
    assert g.psi[2] == ()
    assert lam(2) in g and g.neighbors(lam(2)) == []
    assert g.satellite_neighbors(2) == []


def test_star_satellite_reaches_delta_plus_one():
    # centre 0 of degree 4; every leaf is awake in slot 2
    delta = 4
    net = Network(range(delta + 1), [(0, v) for v in range(1, delta + 1)], 3,
                  {0: {1}, **{v: {2, v % 3 + 1} for v in range(1, delta + 1)}})
    g = build_extended_graph(net)
    assert satellite_coverage(g, lam(0, 2)) == set(range(delta + 1))
    assert len(satellite_coverage(g, lam(0, 2))) == net.max_degree() + 1


def test_coverage_rejects_nuclear(two_node):
    with pytest.raises(ValueError):
        satellite_coverage(build_extended_graph(two_node), lam(0))


def test_induced_subgraph_two_node(two_node):
    sub = induced_satellite_subgraph(build_extended_graph(two_node))
    assert sub.edges() == [(lam(0, 2), lam(1, 1))]


def test_degree_two_node_satellites_form_clique():
    net = Network([0, 1, 2], [(0, 1), (1, 2)], 3, {0: {1}, 1: {3}, 2: {2}})
    g = build_extended_graph(net)
    sats = [lam(1, 1), lam(1, 2)]
    sub = g.satellite_graph()
    assert all(s in sub.index for s in sats)
    assert sub.has_edge(*sats)


@settings(max_examples=60)
@given(networks(min_nodes=1, max_nodes=10, max_K=5, connected=False))
def test_matches_rules_exactly(net):
    nodes, edges = rule_edges(net)
    g = build_extended_graph(net)
    assert set(g.ids) == nodes
    assert set(g.edges()) == edges


@settings(max_examples=50)
@given(networks(min_nodes=1, max_nodes=20, max_K=6, connected=False))
def test_size_bounds_and_adjacency(net):
    g = build_extended_graph(net)
    K, V, E = net.K, len(net.nodes), len(net.edges)
    assert g.n_nodes <= (K + 1) * V
    assert g.n_edges <= comb(K + 1, 2) * V + 3 * K * K * E
    delta = net.max_degree()
    for a, b in g.edges():
        assert a.is_satellite or b.is_satellite
    for w in g.satellites:
        cov = satellite_coverage(g, w)
        assert len(cov) <= delta + 1
        # exact nuclear neighbourhood: the owner plus neighbours awake in w's slot
        owner = w.node
        assert cov == {owner} | {v for v in net.neighbors(owner) if w.slot in net.active(v)}


@settings(max_examples=30)
@given(networks(min_nodes=1, max_nodes=10, max_K=5, connected=False))
def test_satellite_subgraph_is_induced(net):
    g = build_extended_graph(net)
    sub = induced_satellite_subgraph(g)
    expected = [(a, b) for a, b in g.edges() if a.is_satellite and b.is_satellite]
    assert sub.edges() == expected
    assert sub.n_edges <= g.n_edges


@settings(max_examples=20)
@given(networks(max_nodes=9))
def test_deterministic(net):
    a, b = build_extended_graph(net), build_extended_graph(net)
    assert a.ids == b.ids and a.dump() == b.dump()
