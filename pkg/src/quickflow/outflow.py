"""Maximum out-flow o(X) and violation v(X) = o(X) - b(X).

o(X) is the value of a maximum flow over time from the sources in X to the
sinks outside X. It is obtained from one static min-cost circulation: the
network arcs cost their transit time, a super-source feeds the selected
sources, the selected sinks drain into a super-sink, and a return arc from
super-sink to super-source costs -T. The out-flow is the negated optimum.
"""

from __future__ import annotations

import threading
from typing import Iterable

from .model import SOURCE, SINK, ContractError, TransshipmentInstance, net_balance
from .static_flow import StaticGraph, min_cost_circulation


def capacity_bound(instance: TransshipmentInstance) -> int:
    """Finite stand-in for unbounded capacities.

    Larger than any flow rate a path containing a finite arc can carry, so it
    never binds an optimum that a finite network would reach.
    """
    return instance.network.finite_capacity_total() + instance.total_supply() + 1


def outflow_graph(
    instance: TransshipmentInstance, X: Iterable[str], horizon: int
) -> tuple[StaticGraph, dict[str, int]]:
    X = set(X)
    net = instance.network
    index = {v: i for i, v in enumerate(net.nodes)}
    g = StaticGraph(len(net.nodes))
    bound = capacity_bound(instance)
    for a in net.arcs:
        g.add_arc(index[a.tail], index[a.head], min(a.capacity, bound), a.transit)
    s_plus = g.add_node()
    s_minus = g.add_node()
    for t in instance.terminals:
        kind = instance.kind(t)
        if kind == SOURCE and t in X:
            g.add_arc(s_plus, index[t], bound, 0)
        elif kind == SINK and t not in X:
            g.add_arc(index[t], s_minus, bound, 0)
    k = sum(1 for t in instance.terminals if (instance.kind(t) == SOURCE) == (t in X))
    g.add_arc(s_minus, s_plus, bound * (k + 1), -horizon)
    return g, index


def _check_subset(instance: TransshipmentInstance, X: Iterable[str]) -> frozenset[str]:
    X = frozenset(X)
    extra = X - set(instance.terminals)
    if extra:
        raise ContractError(f"not terminals: {sorted(extra)}")
    return X


def max_outflow(
    instance: TransshipmentInstance, X: Iterable[str], horizon: int | None = None
) -> int:
    T = instance.require_horizon(horizon)
    X = _check_subset(instance, X)
    if not any(instance.kind(t) == SOURCE for t in X):
        return 0
    g, _ = outflow_graph(instance, X, T)
    return -min_cost_circulation(g).cost


def violation(
    instance: TransshipmentInstance, X: Iterable[str], horizon: int | None = None
) -> int:
    X = _check_subset(instance, X)
    return max_outflow(instance, X, horizon) - net_balance(instance, X)


class OutflowOracle:
    """Memoized o(X)/v(X) for one fixed instance and horizon.

    ``mcf_calls`` counts the min-cost circulations actually solved (cache
    misses and trivial empty-source sets are not counted).
    """

    def __init__(self, instance: TransshipmentInstance, horizon: int | None = None):
        self.instance = instance
        self.horizon = instance.require_horizon(horizon)
        self.mcf_calls = 0
        self._cache: dict[frozenset[str], int] = {}
        self._lock = threading.Lock()

    def outflow(self, X: Iterable[str]) -> int:
        X = frozenset(X)
        with self._lock:
            if X in self._cache:
                return self._cache[X]
        X = _check_subset(self.instance, X)
        if any(self.instance.kind(t) == SOURCE for t in X):
            g, _ = outflow_graph(self.instance, X, self.horizon)
            value = -min_cost_circulation(g).cost
            counted = 1
        else:
            value, counted = 0, 0
        with self._lock:
            self.mcf_calls += counted
            self._cache[X] = value
        return value

    def rebind(self, instance: TransshipmentInstance) -> OutflowOracle:
        """Oracle for an instance differing only in balances, sharing cached out-flows."""
        other = OutflowOracle(instance, self.horizon)
        other._cache = self._cache
        other._lock = self._lock
        return other

    def violation(self, X: Iterable[str]) -> int:
        X = frozenset(X)
        return self.outflow(X) - net_balance(self.instance, X)

    def is_tight(self, X: Iterable[str]) -> bool:
        return self.violation(X) == 0
