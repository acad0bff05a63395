import json

import pytest
from hypothesis import given, strategies as st

from quickflow.model import (
    SINK,
    SOURCE,
    U_INF,
    Arc,
    ContractError,
    DynamicNetwork,
    InstanceFormatError,
    TerminalSet,
    TransshipmentInstance,
    example_i1,
    instance_from_dict,
    instance_to_dict,
    load_instance,
    net_balance,
    save_instance,
    validate,
)

UNIVERSE = ("a", "b", "c", "d", "e")
subsets = st.sets(st.sampled_from(UNIVERSE))


def ts(names):
    return TerminalSet.from_names(UNIVERSE, names)


@given(subsets, subsets)
def test_terminal_set_matches_python_sets(x, y):
    X, Y = ts(x), ts(y)
    assert (X | Y).names() == x | y
    assert (X & Y).names() == x & y
    assert (X - Y).names() == x - y
    assert (X <= Y) == (x <= y)
    assert (X < Y) == (x < y)
    assert (X == Y) == (x == y)
    assert len(X) == len(x)
    assert list(X) == [u for u in UNIVERSE if u in x]


def test_terminal_set_rejects_foreign_names():
    with pytest.raises(ContractError):
        ts({"z"})


def test_i1_terminals_and_kinds(i1):
    assert i1.terminals == ("s", "t")
    assert i1.kind("s") == SOURCE and i1.kind("t") == SINK and i1.kind("v") is None
    assert i1.total_supply() == 4
    assert net_balance(i1, {"s", "t"}) == 0
    with pytest.raises(ContractError):
        net_balance(i1, {"v"})


def test_validate_reports_each_rule():
    net = DynamicNetwork(("s", "t"), (Arc(0, "s", "t", -1, 0), Arc(0, "s", "x", 1, -2)))
    problems = validate(TransshipmentInstance(net, {"s": 2, "t": -1}))
    assert "balances sum to 1 != 0" in problems
    assert "arc 0: negative capacity" in problems
    assert "arc 0: duplicate arc id" in problems
    assert "arc 0: endpoint not a node" in problems
    assert "arc 0: negative transit" in problems
    assert validate(example_i1()) == []


def test_json_round_trip_with_infinite_capacity(tmp_path):
    net = DynamicNetwork(("s", "t"), (Arc(0, "s", "t", U_INF, 2),))
    inst = TransshipmentInstance(net, {"s": 1, "t": -1}, 3)
    data = instance_to_dict(inst)
    assert data["arcs"][0]["capacity"] == "inf"
    save_instance(inst, tmp_path / "x.json")
    back = load_instance(tmp_path / "x.json")
    assert back == inst


def test_malformed_files(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(InstanceFormatError):
        load_instance(p)
    with pytest.raises(InstanceFormatError):
        instance_from_dict({"arcs": []})
    p.write_text(json.dumps([1, 2]))
    with pytest.raises(InstanceFormatError):
        load_instance(p)


def test_require_horizon():
    inst = example_i1(None)
    with pytest.raises(ContractError):
        inst.require_horizon()
    assert inst.require_horizon(7) == 7
    assert inst.with_horizon(3).horizon == 3
