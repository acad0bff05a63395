import itertools
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from quickflow.generate import random_instance
from quickflow.model import ContractError, example_i1
from quickflow.parametric import (
    ALPHA,
    DELTA,
    ParametricFamily,
    ParametricValue,
    alpha_max,
    baseline_search,
    build_parametric_instance,
    make_context,
    maximize_alpha,
    minimize_delta,
    parameter_range,
    restricted_v,
)
from quickflow.pipeline import lift, refine
from quickflow.te_oracle import brute_feasibility


@pytest.fixture
def lifted5():
    return lift(example_i1(5))


@pytest.fixture
def alpha_ctx(lifted5):
    return make_context(lifted5, set(), {"~s", "~t"}, "~s", ALPHA)


@pytest.fixture
def delta_ctx(alpha_ctx):
    inst, s1, _ = build_parametric_instance(alpha_ctx, 1)
    return make_context(inst, {s1}, {s1, "~s", "~t"}, "~s", DELTA)


def scan(ctx):
    """Optimum by brute-force feasibility of every parameter value."""
    fam = ParametricFamily(ctx)
    lo, hi = parameter_range(ctx)
    ok = [p for p in range(lo, hi + 1) if brute_feasibility(fam.instance(p))]
    return max(ok) if ctx.param == ALPHA else min(ok)


def test_alpha_instance_shifts_supply(alpha_ctx):
    inst, s1, shift = build_parametric_instance(alpha_ctx, ParametricValue(ALPHA, 1))
    # One unit of rate over a path of length 2 within 5 slots.
    assert shift == 3 == 1 * (5 - 2)
    assert inst.balance(s1) == 3 and inst.balance("~s") == 1
    assert sum(inst.balances.values()) == 0
    assert build_parametric_instance(alpha_ctx, 0)[2] == 0
    # The context instance is untouched.
    assert s1 not in alpha_ctx.instance.network.nodes


def test_delta_instance_shift(delta_ctx):
    _, _, shift = build_parametric_instance(delta_ctx, 2)
    assert shift == 1 == min(1, max(0, 5 - 2 - 2))


def test_restricted_values(alpha_ctx):
    assert restricted_v(alpha_ctx, 6, {"~t"}) == -2
    assert restricted_v(alpha_ctx, 1, {"~t"}) == 0 - (3 - 4)
    assert restricted_v(alpha_ctx, 4, set()) == 0
    with pytest.raises(ContractError):
        restricted_v(alpha_ctx, 1, {"s"})


def test_alpha_max_i1(alpha_ctx):
    assert alpha_max(alpha_ctx) == 6


def test_maximize_alpha_trace(alpha_ctx):
    opt, stats = maximize_alpha(alpha_ctx)
    assert opt == 1 == scan(alpha_ctx)
    assert [(r["p"], r["X"]) for r in stats.trace] == [(6, ["~t"]), (1, [])]
    assert stats.iterations == 1


def test_minimize_delta(delta_ctx):
    opt, stats = minimize_delta(delta_ctx)
    assert opt == 2 == scan(delta_ctx)
    fam = ParametricFamily(delta_ctx)
    assert [fam.restricted(d, {"~t"}) for d in (0, 1, 2)] == [-2, -1, 0]


def test_baseline_agrees_and_counts(alpha_ctx, delta_ctx):
    opt, stats = baseline_search(alpha_ctx)
    assert opt == 1
    assert stats.sfm_calls == math.ceil(math.log2(alpha_max(alpha_ctx) + 1))
    assert baseline_search(delta_ctx)[0] == 2


def test_wrong_kind_and_bad_contexts(alpha_ctx, lifted5, i1):
    with pytest.raises(ContractError):
        minimize_delta(alpha_ctx)
    with pytest.raises(ContractError):
        make_context(lifted5, {"~s"}, {"~s"}, "~s", ALPHA)
    with pytest.raises(ContractError):
        make_context(lifted5, set(), {"~s", "~t"}, "~s", "gamma")
    # At T=4 the drained source alone is already tight.
    with pytest.raises(ContractError):
        make_context(lift(i1), set(), {"~s", "~t"}, "~s", ALPHA)
    with pytest.raises(ContractError):
        build_parametric_instance(alpha_ctx, -1)


def test_sink_context_matches_scan(lifted5):
    ctx_a = make_context(lifted5, set(), {"~s", "~t"}, "~t", ALPHA)
    alpha, _ = maximize_alpha(ctx_a)
    assert alpha == scan(ctx_a)
    inst, _, shift = build_parametric_instance(ctx_a, alpha)
    assert shift <= 0
    ctx_d = make_context(inst, set(), {"~s", "~t"}, "~t", DELTA)
    assert minimize_delta(ctx_d)[0] == scan(ctx_d)


def contexts_of(seed):
    ctxs = []
    refine(lift(random_instance(random.Random(seed))), on_context=ctxs.append)
    return ctxs


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 100_000))
def test_searches_match_scan(seed):
    for ctx in contexts_of(seed):
        expected = scan(ctx)
        opt, stats = (maximize_alpha if ctx.param == ALPHA else minimize_delta)(ctx)
        assert opt == expected == baseline_search(ctx)[0]
        assert stats.iterations <= stats.ground_size + 1
        # Minimal minimizers form a chain along the search.
        chain = [frozenset(r["X"]) for r in stats.trace]
        for i, (a, b) in enumerate(zip(chain, chain[1:])):
            if i == len(chain) - 2:
                assert (b <= a) if ctx.kind == "source" else (a <= b)
            else:
                assert (b < a) if ctx.kind == "source" else (a < b)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 100_000))
def test_monotone_and_strong_map(seed):
    for ctx in contexts_of(seed):
        fam = ParametricFamily(ctx)
        lo, hi = parameter_range(ctx)
        ps = sorted({lo, hi, (lo + hi) // 2, min(hi, lo + 1)})
        # Strong map on the search domain, where the drained terminal is fixed.
        dom = ctx.search_domain
        sets = [ctx.anchor | frozenset(c) for r in range(len(dom) + 1) for c in itertools.combinations(dom, r)]
        v = {p: {X: fam.restricted(p, X) for X in sets} for p in ps}
        for p, q in zip(ps, ps[1:]):
            for X in sets:
                if ctx.param == ALPHA:
                    assert v[p][X] >= v[q][X]
                else:
                    assert v[p][X] <= v[q][X]
                for Y in sets:
                    if X <= Y:
                        earlier, later = (v[q], v[p]) if ctx.param == ALPHA else (v[p], v[q])
                        d_early = earlier[Y] - earlier[X]
                        d_late = later[Y] - later[X]
                        if ctx.kind == "source":
                            assert d_late >= d_early
                        else:
                            assert d_late <= d_early


def test_strong_map_needs_fixed_drained_terminal():
    # Supply shift larger than the drained balance: on the full domain the
    # strong map fails for a pair that differs only in the drained terminal.
    ctx = next(c for c in contexts_of(0) if c.param == ALPHA and c.kind == "source")
    fam = ParametricFamily(ctx)
    assert fam.shift(1) > ctx.instance.balance(ctx.drained)
    X = frozenset(t for t in ctx.search_domain if ctx.instance.balance(t) > 0)
    Y = X | {ctx.drained}
    d0 = fam.restricted(0, Y) - fam.restricted(0, X)
    d1 = fam.restricted(1, Y) - fam.restricted(1, X)
    assert d1 > d0
