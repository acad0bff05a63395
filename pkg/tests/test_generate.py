import random

import pytest
from hypothesis import given, settings, strategies as st

from quickflow.generate import NoFeasibleHorizon, corpus, min_horizon, random_instance
from quickflow.model import Arc, DynamicNetwork, TransshipmentInstance, validate
from quickflow.te_oracle import brute_feasibility


def single_arc(supply=3, transit=2):
    net = DynamicNetwork(("s", "t"), (Arc(0, "s", "t", 1, transit),))
    return TransshipmentInstance(net, {"s": supply, "t": -supply})


def test_single_arc_horizon():
    assert min_horizon(single_arc()) == 5
    assert brute_feasibility(single_arc(), 5) and not brute_feasibility(single_arc(), 4)


def test_i1_horizon(i1):
    assert min_horizon(i1.with_horizon(None)) == 4


def test_no_supply_needs_no_time():
    inst = TransshipmentInstance(DynamicNetwork(("a",), ()), {})
    assert min_horizon(inst) == 0


def test_unreachable_sink_raises():
    net = DynamicNetwork(("s", "t"), (Arc(0, "t", "s", 1, 1),))
    with pytest.raises(NoFeasibleHorizon):
        min_horizon(TransshipmentInstance(net, {"s": 1, "t": -1}))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 100_000))
def test_generated_instances(seed):
    inst = random_instance(random.Random(seed))
    assert not validate(inst)
    assert len(inst.network.nodes) <= 8 and len(inst.network.arcs) <= 16
    assert 2 <= len(inst.terminals) <= 4
    T = min_horizon(inst)
    assert T <= inst.horizon <= T + 2
    assert brute_feasibility(inst, T) and not brute_feasibility(inst, T - 1)


def test_corpus_is_seeded():
    assert corpus(3, 4) == corpus(3, 4)
