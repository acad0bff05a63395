import itertools

import pytest
from hypothesis import given, settings, strategies as st

from quickflow.model import example_i1
from quickflow.sfm import (
    GroundSetTooLarge,
    NotSubmodularError,
    SetFunction,
    is_feasible,
    minimize,
)


@st.composite
def cut_functions(draw):
    """Cut function of a random weighted digraph plus a modular term."""
    k = draw(st.integers(0, 6))
    ground = tuple(f"g{i}" for i in range(k))
    nodes = ground + ("src", "dst")
    edges = draw(st.lists(st.tuples(st.sampled_from(nodes), st.sampled_from(nodes),
                                    st.integers(0, 5)), max_size=15))
    weights = {g: draw(st.integers(-6, 6)) for g in ground}

    def f(X):
        side = set(X) | {"src"}
        cut = sum(w for u, v, w in edges if u in side and v not in side)
        return cut + sum(weights[g] for g in X)

    return SetFunction(ground, f)


@settings(max_examples=200, deadline=None)
@given(cut_functions())
def test_minimal_and_maximal_minimizers(f):
    res = minimize(f)
    subsets = [frozenset(c) for r in range(len(f.ground) + 1)
               for c in itertools.combinations(f.ground, r)]
    values = {X: f.evaluator(X) for X in subsets}
    best = min(values.values())
    argmins = [X for X in subsets if values[X] == best]
    assert res.value == best
    assert res.minimal.names() == frozenset.intersection(*argmins)
    assert res.maximal.names() == frozenset.union(*argmins)
    assert f.calls == 2 ** len(f.ground)


def test_rejects_non_lattice_minimizers():
    f = SetFunction(("a", "b"), lambda X: 0 if len(X) == 1 else 1)
    with pytest.raises(NotSubmodularError):
        minimize(f)


def test_cap_on_ground_set():
    f = SetFunction(tuple(range(5)), lambda X: 0)
    with pytest.raises(GroundSetTooLarge):
        minimize(f, cap=4)


def test_i1_feasibility_and_witness():
    res = is_feasible(example_i1(3))
    assert not res and res.witness == {"s"} and res.min_violation == -2
    assert is_feasible(example_i1(4))


def test_lifted_alpha_example():
    # I1 at T=5 after lifting, capacity parameter 6, restricted to the twins.
    from quickflow.parametric import ParametricFamily, make_context, ALPHA
    from quickflow.pipeline import lift

    lifted = lift(example_i1(5))
    ctx = make_context(lifted, set(), {"~s", "~t"}, "~s", ALPHA)
    fam = ParametricFamily(ctx)
    f = fam.restricted_function(6)
    assert {X: f(X) for X in [(), ("~t",), ("~s",), ("~s", "~t")]} == {
        (): 0, ("~t",): -2, ("~s",): 2, ("~s", "~t"): 0}
    res = minimize(fam.restricted_function(6))
    assert (res.value, res.minimal.names(), res.maximal.names()) == (-2, {"~t"}, {"~t"})
