import networkx as nx
from hypothesis import given, settings, strategies as st

from quickflow.static_flow import StaticGraph, max_flow, min_cost_circulation


@st.composite
def graphs(draw, negative=False):
    n = draw(st.integers(2, 7))
    m = draw(st.integers(0, 14))
    g = StaticGraph(n)
    for _ in range(m):
        u = draw(st.integers(0, n - 1))
        v = draw(st.integers(0, n - 1).filter(lambda x, u=u: x != u))
        lo = -5 if negative else 0
        g.add_arc(u, v, draw(st.integers(0, 6)), draw(st.integers(lo, 5)))
    return g


def _nx(g):
    G = nx.DiGraph()
    G.add_nodes_from(range(g.n))
    for i, (u, v, c, w) in enumerate(zip(g.tails, g.heads, g.caps, g.costs)):
        # networkx needs a simple digraph; split every arc with a midpoint.
        mid = ("m", i)
        G.add_edge(u, mid, capacity=c, weight=w)
        G.add_edge(mid, v, capacity=c, weight=0)
    return G


def _conserved(g, flow):
    bal = [0] * g.n
    for u, v, x in zip(g.tails, g.heads, flow):
        bal[u] -= x
        bal[v] += x
    return all(b == 0 for b in bal)


@settings(max_examples=150, deadline=None)
@given(graphs())
def test_max_flow_matches_networkx(g):
    res = max_flow(g, 0, g.n - 1)
    expected = nx.maximum_flow_value(_nx(g), 0, g.n - 1)
    assert res.value == expected
    assert all(0 <= x <= c for x, c in zip(res.flow, g.caps))


@settings(max_examples=150, deadline=None)
@given(graphs(negative=True))
def test_min_cost_circulation_matches_networkx(g):
    res = min_cost_circulation(g)
    assert _conserved(g, res.flow)
    assert all(0 <= x <= c for x, c in zip(res.flow, g.caps))
    assert res.cost == g.flow_cost(res.flow)
    # Negative arcs are saturated up front by a network-simplex reference too.
    G = _nx(g)
    for u in range(g.n):
        G.nodes[u]["demand"] = 0
    expected = nx.min_cost_flow_cost(G)
    assert res.cost == expected


def test_empty_and_trivial_graphs():
    assert min_cost_circulation(StaticGraph(0)).cost == 0
    g = StaticGraph(2)
    g.add_arc(0, 1, 3, 1)
    g.add_arc(1, 0, 3, -4)
    res = min_cost_circulation(g)
    assert res.flow == [3, 3] and res.cost == -9
