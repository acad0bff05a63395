import itertools

import pytest
from hypothesis import given, settings, strategies as st

from quickflow.model import Arc, ContractError, DynamicNetwork, TransshipmentInstance
from quickflow.outflow import OutflowOracle, max_outflow, violation
from quickflow.te_oracle import outflow_te


def single_arc(u, tau, b, T):
    net = DynamicNetwork(("s", "t"), (Arc(0, "s", "t", u, tau),))
    return TransshipmentInstance(net, {"s": b, "t": -b}, T)


@pytest.mark.parametrize("T", [1, 2, 3, 4, 5, 8])
def test_i1_source_outflow_is_rate_times_window(i1, T):
    # One path of capacity 2 and length 2: 2 * max(0, T - 2) units.
    assert max_outflow(i1, {"s"}, T) == 2 * max(0, T - 2) == outflow_te(i1, {"s"}, T)


def test_i1_sets_without_sources(i1):
    assert max_outflow(i1, set()) == 0
    assert max_outflow(i1, {"t"}) == 0
    # Both terminals inside: no sink is left outside.
    assert max_outflow(i1, {"s", "t"}) == 0
    assert violation(i1, {"t"}) == 4
    assert violation(i1, {"s"}) == 0


def test_rejects_non_terminals(i1):
    with pytest.raises(ContractError):
        max_outflow(i1, {"v"})


@given(st.integers(1, 5), st.integers(0, 4), st.integers(0, 12))
def test_single_arc_closed_form(u, tau, T):
    inst = single_arc(u, tau, 3, T)
    assert max_outflow(inst, {"s"}) == u * max(0, T - tau)


def test_oracle_caches_and_counts(i1):
    oracle = OutflowOracle(i1)
    for _ in range(3):
        assert oracle.outflow({"s"}) == 4
    assert oracle.mcf_calls == 1
    assert oracle.outflow(set()) == 0
    assert oracle.mcf_calls == 1
    assert oracle.is_tight({"s"}) and not oracle.is_tight({"t"})


def test_rebind_shares_outflows_but_not_balances(i1):
    oracle = OutflowOracle(i1)
    oracle.outflow({"s"})
    other = oracle.rebind(TransshipmentInstance(i1.network, {"s": 3, "t": -3}, 4))
    assert other.violation({"s"}) == 1
    assert other.mcf_calls == 0


def test_submodular_on_small_corpus(small_corpus):
    for inst in small_corpus:
        oracle = OutflowOracle(inst)
        S = inst.terminals
        subsets = [frozenset(c) for r in range(len(S) + 1) for c in itertools.combinations(S, r)]
        o = {X: oracle.outflow(X) for X in subsets}
        for X in subsets:
            for Y in subsets:
                assert o[X | Y] + o[X & Y] <= o[X] + o[Y]


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_matches_time_expansion_on_random_instances(seed):
    import random

    from quickflow.generate import random_instance

    inst = random_instance(random.Random(seed), n_range=(2, 5), k_range=(2, 3))
    for r in range(len(inst.terminals) + 1):
        for X in itertools.combinations(inst.terminals, r):
            assert max_outflow(inst, X) == outflow_te(inst, X)
