"""Ground truth via time-expanded networks.

The expansion has one copy ``v_theta`` per node and time slot
``theta = 0..T-1``. Arc ``a`` departing in slot ``theta`` arrives in slot
``theta + transit``; only departures with ``theta + transit < T`` exist.
Holdover arcs ``v_theta -> v_theta+1`` model waiting at a node.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .flows import FlowOverTime
from .model import SOURCE, SINK, U_INF, TransshipmentInstance
from .outflow import capacity_bound
from .static_flow import StaticGraph, max_flow

DEFAULT_CAP = 5000


class OracleSizeError(RuntimeError):
    pass


class InfeasibleError(RuntimeError):
    pass


def oracle_cap() -> int:
    return int(os.environ.get("QT_ORACLE_CAP", DEFAULT_CAP))


@dataclass
class TimeExpandedGraph:
    graph: StaticGraph
    horizon: int
    node_index: dict[tuple[str, int], int]
    movement: list[tuple[int, int, int]]  # (static arc index, arc id, theta)
    holdover_count: int


def expand(
    instance: TransshipmentInstance,
    horizon: int | None = None,
    storage: str = "all",
    cap: int | None = None,
) -> TimeExpandedGraph:
    """Build the expansion. ``storage`` is ``"all"`` or ``"terminals"``."""
    T = instance.require_horizon(horizon)
    net = instance.network
    limit = oracle_cap() if cap is None else cap
    if T * len(net.nodes) > limit:
        raise OracleSizeError(
            f"time expansion has {T * len(net.nodes)} nodes, cap is {limit}"
        )
    g = StaticGraph()
    idx: dict[tuple[str, int], int] = {}
    for v in net.nodes:
        for theta in range(T):
            idx[v, theta] = g.add_node()
    bound = capacity_bound(instance)
    movement = []
    for a in net.arcs:
        u = min(a.capacity, bound)
        for theta in range(T - a.transit):
            e = g.add_arc(idx[a.tail, theta], idx[a.head, theta + a.transit], u, a.transit)
            movement.append((e, a.id, theta))
    holdovers = 0
    terminals = set(instance.terminals)
    for v in net.nodes:
        if storage == "all" or v in terminals:
            for theta in range(T - 1):
                g.add_arc(idx[v, theta], idx[v, theta + 1], U_INF)
                holdovers += 1
    return TimeExpandedGraph(g, T, idx, movement, holdovers)


def outflow_te(instance: TransshipmentInstance, X, horizon: int | None = None) -> int:
    """o(X) as a static max flow on the expansion."""
    X = set(X)
    te = expand(instance, horizon)
    g = te.graph
    src, dst = g.add_node(), g.add_node()
    for t in instance.terminals:
        if instance.kind(t) == SOURCE and t in X:
            g.add_arc(src, te.node_index[t, 0], U_INF)
        elif instance.kind(t) == SINK and t not in X:
            for theta in range(te.horizon):
                g.add_arc(te.node_index[t, theta], dst, U_INF)
    return max_flow(g, src, dst).value


def _transshipment_flow(instance: TransshipmentInstance, horizon, storage):
    te = expand(instance, horizon, storage=storage)
    g = te.graph
    src, dst = g.add_node(), g.add_node()
    last = te.horizon - 1
    supply = 0
    for v, b in instance.balances.items():
        if b > 0:
            g.add_arc(src, te.node_index[v, 0], b)
            supply += b
        elif b < 0:
            g.add_arc(te.node_index[v, last], dst, -b)
    result = max_flow(g, src, dst)
    return te, result, supply


def brute_feasibility(instance: TransshipmentInstance, horizon: int | None = None) -> bool:
    if instance.total_supply() == 0:
        return True
    if instance.require_horizon(horizon) <= 0:
        return False  # no time slot to move anything in
    _, result, supply = _transshipment_flow(instance, horizon, "all")
    return result.value == supply


def solve_time_expanded(
    instance: TransshipmentInstance, horizon: int | None = None, storage: str = "terminals"
) -> FlowOverTime:
    """Integral flow over time meeting all balances, read off a max flow.

    With ``storage="terminals"`` only terminals may hold flow, so the result
    passes strict verification.
    """
    T = instance.require_horizon(horizon)
    flow = FlowOverTime(T, method="time-expanded")
    if instance.total_supply() == 0:
        return flow
    if T <= 0:
        raise InfeasibleError("supply cannot move within horizon 0")
    te, result, supply = _transshipment_flow(instance, T, storage)
    if result.value != supply:
        raise InfeasibleError(f"only {result.value} of {supply} units can be delivered")
    for e, arc_id, theta in te.movement:
        if result.flow[e]:
            flow.add(arc_id, theta, result.flow[e])
    return flow


def verify(
    flow: FlowOverTime, instance: TransshipmentInstance, strict: bool = False
) -> list[str]:
    """Check capacities, timing, conservation and balance delivery.

    Holdover at any node is allowed unless ``strict``, in which case nodes
    that are not terminals must forward everything in the slot it arrives.
    """
    problems: list[str] = []
    T = flow.horizon
    if instance.horizon is not None and instance.horizon != T:
        problems.append(f"flow horizon {T} != instance horizon {instance.horizon}")
    net = instance.network
    arcs = {a.id: a for a in net.arcs}
    arrivals: dict[str, dict[int, int]] = {v: {} for v in net.nodes}
    departures: dict[str, dict[int, int]] = {v: {} for v in net.nodes}
    for (arc_id, theta), value in sorted(flow.expanded.items()):
        a = arcs.get(arc_id)
        if a is None:
            problems.append(f"arc {arc_id}: unknown arc")
            continue
        if not isinstance(value, int):
            problems.append(f"arc {arc_id} at {theta}: non-integral flow {value!r}")
            continue
        if not 0 <= theta < T - a.transit:
            problems.append(f"arc {arc_id} at {theta}: outside [0, {T - a.transit})")
            continue
        if value < 0:
            problems.append(f"arc {arc_id} at {theta}: negative flow {value}")
        if not a.infinite and value > a.capacity:
            problems.append(f"arc {arc_id} at {theta}: flow {value} exceeds capacity {a.capacity}")
        departures[a.tail][theta] = departures[a.tail].get(theta, 0) + value
        arr = theta + a.transit
        arrivals[a.head][arr] = arrivals[a.head].get(arr, 0) + value
    terminals = set(instance.terminals) | {v for v, b in instance.balances.items() if b}
    for v in net.nodes:
        b = instance.balance(v)
        stock = max(b, 0)
        for theta in range(T):
            inn = arrivals[v].get(theta, 0)
            out = departures[v].get(theta, 0)
            if strict and v not in terminals and inn != out:
                problems.append(f"node {v!r} at {theta}: holds {inn - out} units (strict)")
            stock += inn - out
            if stock < 0:
                problems.append(f"node {v!r} at {theta}: sends {-stock} units it does not have")
                stock = 0
        net_out = sum(departures[v].values()) - sum(arrivals[v].values())
        if net_out != b:
            problems.append(f"node {v!r}: net out-flow {net_out} != balance {b}")
    return problems

