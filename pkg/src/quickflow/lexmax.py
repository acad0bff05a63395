"""Integral transshipment over time from a tight order.

Terminals are added to a growing prefix in the tight order. At step ``i``
the super-source feeds the sources of the prefix and the sinks outside it
drain into the super-sink. Successive shortest super-source to super-sink
paths are augmented on the residual network of the static flow so far, as
long as they are shorter than ``T``. This is one min-cost flow computation
per terminal. Each augmenting path, backward arcs included, is sent as a
generalized temporally repeated flow over ``[0, T - length)``. The sum of
these path flows forms the expanded table.

Terminal arcs get no reverse residual arcs, so no augmentation takes
out-flow away from an earlier prefix. This keeps each step's residual
network free of negative cycles, but it can miss flows whose timing is not
temporally repeated. Every result is therefore checked by the time-expanded
verifier; the chain is tried front to back and then back to front, and if
neither verifies the time-expanded solver is used instead. The output
records which method produced it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .flows import BWD, FWD, FlowOverTime, PathFlow
from .model import SOURCE, ContractError, TransshipmentInstance
from .outflow import capacity_bound
from .te_oracle import solve_time_expanded, verify

REDUCTION = "reduction"
TIME_EXPANDED = "time-expanded"


class LexMaxError(AssertionError):
    pass


@dataclass
class LexMaxStats:
    method: str = "lex-max"
    mcf_calls: int = 0
    fallback: bool = False
    direction: str = ""
    attempts: int = 0
    reason: str = ""
    problems: list[str] = field(default_factory=list)


@dataclass
class _Base:
    """Static network of one instance: network arcs, terminal arcs, return arc."""

    n: int
    tails: list[int]
    heads: list[int]
    caps: list[int]
    costs: list[int]
    arc_ids: list[int | None]  # network arc id, None for artificial arcs
    terminal_arc: dict[str, int]
    ret: int
    s_plus: int
    s_minus: int


def _base(instance: TransshipmentInstance, T: int) -> _Base:
    net = instance.network
    index = {v: i for i, v in enumerate(net.nodes)}
    bound = capacity_bound(instance)
    b = _Base(len(net.nodes) + 2, [], [], [], [], [], {}, -1, len(net.nodes), len(net.nodes) + 1)

    def add(u, v, cap, cost, arc_id=None):
        b.tails.append(u)
        b.heads.append(v)
        b.caps.append(cap)
        b.costs.append(cost)
        b.arc_ids.append(arc_id)
        return len(b.tails) - 1

    for a in net.arcs:
        add(index[a.tail], index[a.head], min(a.capacity, bound), a.transit, a.id)
    for t in instance.terminals:
        if instance.kind(t) == SOURCE:
            b.terminal_arc[t] = add(b.s_plus, index[t], bound, 0)
        else:
            b.terminal_arc[t] = add(index[t], b.s_minus, bound, 0)
    b.ret = add(b.s_minus, b.s_plus, bound * (len(instance.terminals) + 1), -T)
    return b


def _shortest_path(n, arcs, src, dst):
    """Bellman-Ford over residual arcs ``(tail, head, cap, cost)``."""
    INF = float("inf")
    dist = [INF] * n
    pred = [-1] * n
    dist[src] = 0
    for rnd in range(n):
        changed = False
        for i, (u, v, cap, cost) in enumerate(arcs):
            if cap > 0 and dist[u] + cost < dist[v]:
                dist[v] = dist[u] + cost
                pred[v] = i
                changed = True
        if not changed:
            break
    else:
        raise LexMaxError("residual network has a negative cycle")
    if dist[dst] == INF:
        return None, INF
    path = []
    v = dst
    while v != src:
        i = pred[v]
        path.append(i)
        v = arcs[i][0]
    path.reverse()
    return path, dist[dst]


def _reduction(instance: TransshipmentInstance, order, T: int, stats: LexMaxStats, reverse: bool = False) -> FlowOverTime:
    base = _base(instance, T)
    m = len(base.tails)
    x = [0] * m
    prefix: set[str] = set(order) if reverse else set()
    flow = FlowOverTime(T, method="lex-max")
    net_arcs = {a.id: a for a in instance.network.arcs}
    drain = {e: t for t, e in base.terminal_arc.items()}

    def is_open(e):
        t = drain.get(e)
        return t is None or (t in prefix) == (instance.kind(t) == SOURCE)

    for t in (reversed(order) if reverse else order):
        if reverse:
            prefix.discard(t)
        else:
            prefix.add(t)
        stats.mcf_calls += 1
        # Successive shortest super-source/super-sink paths; the return arc is
        # implicit, so a path is worth sending while it is shorter than T.
        while True:
            arcs = []
            for e in range(m):
                if e == base.ret:
                    continue
                cap = base.caps[e] if is_open(e) else 0
                arcs.append((base.tails[e], base.heads[e], max(cap - x[e], 0), base.costs[e], e, FWD))
                # Reducing a terminal arc would take out-flow away from an
                # earlier prefix, so terminal arcs have no reverse residual arc.
                back = 0 if e in drain else x[e]
                arcs.append((base.heads[e], base.tails[e], back, -base.costs[e], e, BWD))
            path, length = _shortest_path(base.n, [a[:4] for a in arcs], base.s_plus, base.s_minus)
            if path is None or length >= T:
                break
            amount = min(arcs[i][2] for i in path)
            hops = []
            for i in path:
                e, d = arcs[i][4], arcs[i][5]
                x[e] += amount if d == FWD else -amount
                if base.arc_ids[e] is not None:
                    hops.append((base.arc_ids[e], d))
            x[base.ret] += amount
            _add_path(flow, net_arcs, hops, amount, T)
    return flow


def _add_path(flow: FlowOverTime, arcs_by_id, arcs, value: int, T: int) -> None:
    """Generalized temporally repeated flow along one augmenting path."""
    length = sum(arcs_by_id[a].transit * (1 if d == FWD else -1) for a, d in arcs)
    end = T - length
    if end <= 0 or not arcs:
        return
    flow.paths.append(PathFlow(tuple(arcs), value, 0, end))
    for theta in range(end):
        clock = theta
        for a, d in arcs:
            tau = arcs_by_id[a].transit
            if d == FWD:
                flow.add(a, clock, value)
                clock += tau
            else:
                clock -= tau
                flow.add(a, clock, -value)


def lex_max_transshipment(
    instance: TransshipmentInstance,
    order,
    method: str = REDUCTION,
    horizon: int | None = None,
) -> tuple[FlowOverTime, LexMaxStats]:
    T = instance.require_horizon(horizon)
    order = list(order)
    if sorted(order) != sorted(instance.terminals):
        raise ContractError("order must list every terminal exactly once")
    stats = LexMaxStats()
    if method not in (REDUCTION, TIME_EXPANDED):
        raise ContractError(f"unknown lex-max method {method!r}")
    if not order or instance.total_supply() == 0:
        return FlowOverTime(T, method="lex-max"), stats
    if method == REDUCTION:
        # The prefix chain is consumed from the front first, then from the
        # back; whichever verifies first is returned.
        for reverse in (False, True):
            attempt = LexMaxStats()
            try:
                flow = _reduction(instance, order, T, attempt, reverse)
                problems = verify(flow, instance, strict=True)
            except LexMaxError as exc:
                problems = [str(exc)]
            stats.attempts += 1
            if not problems:
                stats.mcf_calls = attempt.mcf_calls
                stats.direction = "backward" if reverse else "forward"
                return flow, stats
            stats.reason = "verification failed"
            stats.problems = problems
    stats.fallback = method == REDUCTION
    stats.method = TIME_EXPANDED
    flow = solve_time_expanded(instance, T, storage="terminals")
    problems = verify(flow, instance, strict=True)
    if problems:
        raise LexMaxError("time-expanded flow failed verification: " + "; ".join(problems))
    return flow, stats


def project(
    flow: FlowOverTime, lifted: TransshipmentInstance, original: TransshipmentInstance
) -> FlowOverTime:
    """Restrict a flow on a refined instance to the arcs of the original one.

    Artificial arcs only join twins and filled terminals to their original
    node. Dropping them leaves every original arc's table unchanged; path
    windows are shifted by the transit of the dropped leading arcs.
    """
    keep = {a.id for a in original.network.arcs}
    lifted_arcs = {a.id: a for a in lifted.network.arcs}
    out = FlowOverTime(flow.horizon, method=flow.method)
    for (a, theta), v in flow.expanded.items():
        if a in keep:
            out.add(a, theta, v)
    for p in flow.paths:
        shift = 0
        arcs = []
        for a, d in p.arcs:
            if a in keep:
                arcs.append((a, d))
            elif not arcs:
                shift += lifted_arcs[a].transit if d == FWD else -lifted_arcs[a].transit
        if arcs:
            out.paths.append(PathFlow(tuple(arcs), p.value, p.start + shift, p.end + shift))
    problems = verify(out, original, strict=True)
    if problems:
        raise LexMaxError("projected flow failed verification: " + "; ".join(problems))
    return out
