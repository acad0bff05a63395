"""Lifting, tight-chain refinement and tight orders.

``lift`` gives every terminal a twin that carries its balance. ``refine``
then grows a chain of tight terminal sets from ``(empty, all)`` until every
gap holds a single terminal, splitting supply or demand off drained twins
into filled terminals chosen by the parametric searches.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, TextIO

from .model import (
    SINK,
    SOURCE,
    U_INF,
    Arc,
    ContractError,
    DynamicNetwork,
    Provenance,
    TransshipmentInstance,
)
from .outflow import OutflowOracle
from .parametric import (
    ALPHA,
    DELTA,
    ParametricFamily,
    SearchStats,
    baseline_search,
    build_parametric_instance,
    make_context,
    strong_map_search,
)
from .sfm import SetFunction, minimize

STRONG_MAP = "strong-map"
BASELINE = "baseline"


class InvariantViolation(AssertionError):
    def __init__(self, message: str, trace: list[dict] | None = None):
        super().__init__(message)
        self.trace = list(trace or [])


def drained_name(terminal: str) -> str:
    return f"~{terminal}"


def lift(instance: TransshipmentInstance) -> TransshipmentInstance:
    net = instance.network
    nodes = list(net.nodes)
    arcs = list(net.arcs)
    next_id = net.next_arc_id()
    balances = {v: 0 for v in instance.balances}
    kinds: dict[str, str] = {}
    prov = dict(instance.provenance)
    for t in instance.terminals:
        twin = drained_name(t)
        if twin in nodes:
            raise ContractError(f"node name {twin!r} is reserved")
        nodes.append(twin)
        kind = instance.kind(t)
        tail, head = (twin, t) if kind == SOURCE else (t, twin)
        arcs.append(Arc(next_id, tail, head, U_INF, 0))
        next_id += 1
        balances[twin] = instance.balance(t)
        kinds[twin] = kind
        prov[twin] = Provenance(t, "drained")
    return TransshipmentInstance(
        DynamicNetwork(tuple(nodes), tuple(arcs)), balances, instance.horizon, kinds, prov
    )


@dataclass
class TightChain:
    sets: list[frozenset[str]]
    universe: tuple[str, ...]

    def is_complete(self) -> bool:
        return len(self.sets) == len(self.universe) + 1

    def check(self, oracle: OutflowOracle | None = None) -> list[str]:
        problems = []
        if not self.sets or self.sets[0]:
            problems.append("chain must start with the empty set")
        if self.sets and self.sets[-1] != frozenset(self.universe):
            problems.append("chain must end with all terminals")
        for a, b in zip(self.sets, self.sets[1:]):
            if not a < b:
                problems.append(f"chain not strictly increasing at {sorted(a)} / {sorted(b)}")
        if oracle is not None:
            for s in self.sets:
                if oracle.violation(s) != 0:
                    problems.append(f"{sorted(s)} is not tight")
        return problems


def tight_order(chain: TightChain) -> list[str]:
    if not chain.is_complete():
        raise ContractError(
            f"chain has {len(chain.sets)} sets, need {len(chain.universe) + 1}"
        )
    order = []
    for a, b in zip(chain.sets, chain.sets[1:]):
        (t,) = b - a
        order.append(t)
    return order


def is_tight_order(instance: TransshipmentInstance, order, oracle: OutflowOracle | None = None) -> bool:
    oracle = oracle or OutflowOracle(instance)
    if sorted(order) != sorted(instance.terminals):
        return False
    return all(oracle.violation(order[: i + 1]) == 0 for i in range(len(order)))


@dataclass
class RefineResult:
    instance: TransshipmentInstance
    chain: TightChain
    trace: list[dict] = field(default_factory=list)
    searches: list[SearchStats] = field(default_factory=list)
    contexts: list = field(default_factory=list)

    @property
    def order(self) -> list[str]:
        return tight_order(self.chain)


def _search(ctx, strategy: str):
    if strategy == STRONG_MAP:
        return strong_map_search(ctx)
    if strategy == BASELINE:
        return baseline_search(ctx)
    raise ContractError(f"unknown strategy {strategy!r}")


def _pick(instance: TransshipmentInstance, chain: list[frozenset[str]]):
    for i, (Q, R) in enumerate(zip(chain, chain[1:])):
        if len(R - Q) > 1:
            for t in instance.terminals:
                if t in R and t not in Q and instance.provenance[t].role == "drained":
                    return i, Q, R, t
            raise InvariantViolation(f"gap {sorted(R - Q)} holds no drained terminal")
    return None


def refine(
    lifted: TransshipmentInstance,
    strategy: str = STRONG_MAP,
    trace_out: TextIO | None = None,
    on_context: Callable | None = None,
) -> RefineResult:
    """Refine the chain ``(empty, all)`` into a complete tight chain.

    ``on_context(ctx)`` is called for every parametric context, before it is
    searched (used by the benchmark and the property tests).
    """
    inst = lifted
    oracle = OutflowOracle(inst)
    chain = [frozenset(), frozenset(inst.terminals)]
    result = RefineResult(inst, TightChain(chain, inst.terminals))
    if not inst.terminals:
        result.chain = TightChain([frozenset()], ())
        return result
    if oracle.violation(chain[-1]) != 0:
        raise ContractError("lifted instance is not balanced")

    def fail(msg):
        raise InvariantViolation(msg, result.trace)

    def emit(record):
        record["chain"] = [sorted(s) for s in chain]
        result.trace.append(record)
        if trace_out is not None:
            trace_out.write(json.dumps(record, sort_keys=True) + "\n")

    bound = len(inst.terminals) * 3 + 1
    while True:
        pick = _pick(inst, chain)
        if pick is None:
            break
        if len(result.trace) > bound:
            fail("refinement did not terminate")
        i, Q, R, drained = pick
        kind = inst.kind(drained)
        record = {"branch": None, "Q": sorted(Q), "R": sorted(R), "drained": drained,
                  "kind": kind, "alpha": None, "delta": None, "W": None}
        shortcut = Q | {drained} if kind == SOURCE else R - {drained}
        if oracle.violation(shortcut) == 0:
            chain.insert(i + 1, shortcut)
            record["branch"] = "shortcut"
            emit(record)
            continue

        # Capacity stage.
        ctx_a = make_context(inst, Q, R, drained, ALPHA, oracle)
        if on_context:
            on_context(ctx_a)
        alpha, stats_a = _search(ctx_a, strategy)
        result.searches.append(stats_a)
        result.contexts.append(ctx_a)
        inst, s1, _ = build_parametric_instance(ctx_a, alpha)
        oracle = OutflowOracle(inst)
        if kind == SOURCE:
            Q1, R1 = Q | {s1}, R | {s1}
        else:
            Q1, R1 = Q, R

        # Transit stage.
        ctx_d = make_context(inst, Q1, R1, drained, DELTA, oracle)
        if on_context:
            on_context(ctx_d)
        delta, stats_d = _search(ctx_d, strategy)
        result.searches.append(stats_d)
        result.contexts.append(ctx_d)
        if delta < 1:
            fail(f"minimum transit {delta} < 1 after a maximal capacity")
        fam = ParametricFamily(ctx_d)
        res = minimize(fam.search_function(delta - 1))
        W = ctx_d.anchor | res.minimal.names()
        if res.value != -1:
            fail(f"minimizer at delta*-1 has value {res.value}, expected -1")
        inst, s2, _ = build_parametric_instance(ctx_d, delta)
        oracle = OutflowOracle(inst)

        both = frozenset({s1, s2})
        if kind == SOURCE:
            new = [Q | {s1}, Q | both, Q | both | W]
            tail = [L | both for L in chain[i + 1:]]
        else:
            new = [Q | W]
            tail = [chain[i + 1], chain[i + 1] | {s2}] + [L | both for L in chain[i + 1:]]
        for L in chain[: i + 1]:
            if L & both:
                fail("a set before the gap contains a new terminal")
        chain[i + 1:] = new + tail
        record.update(branch="split", alpha=alpha, delta=delta, W=sorted(W),
                      filled=[s1, s2])
        emit(record)
        for s in chain:
            if oracle.violation(s) != 0:
                fail(f"chain member {sorted(s)} is not tight")

    result.instance = inst
    result.chain = TightChain(chain, inst.terminals)
    problems = result.chain.check(oracle)
    if problems or not result.chain.is_complete():
        raise InvariantViolation("; ".join(problems) or "chain incomplete", result.trace)
    return result
