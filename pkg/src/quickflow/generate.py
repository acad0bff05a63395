"""Seeded random instances and the minimum-horizon search."""

from __future__ import annotations

import random

from .model import Arc, DynamicNetwork, TransshipmentInstance
from .sfm import is_feasible


class NoFeasibleHorizon(ValueError):
    pass


def horizon_upper_bound(instance: TransshipmentInstance) -> int:
    net = instance.network
    tau_max = max((a.transit for a in net.arcs), default=0)
    return len(net.nodes) * tau_max + instance.total_supply()


def min_horizon(instance: TransshipmentInstance) -> int:
    """Smallest T with a feasible transshipment.

    Doubling finds a feasible upper end, then binary search. An instance
    without supply needs no time at all: ``T* = 0``.
    """
    if instance.total_supply() == 0:
        return 0
    limit = horizon_upper_bound(instance)
    feasible = lambda T: is_feasible(instance, T).feasible
    hi = 1
    while not feasible(hi):
        if hi > limit:
            raise NoFeasibleHorizon(f"infeasible for every horizon up to {hi}")
        hi *= 2
    lo = hi // 2 + 1 if hi > 1 else 1  # feasible(hi // 2) is known false
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


def random_instance(
    rng: random.Random,
    n_range=(3, 8),
    m_max: int = 16,
    k_range=(2, 4),
    cap_range=(1, 10),
    transit_range=(0, 5),
    supply_max: int = 3,
    slack_max: int = 2,
) -> TransshipmentInstance:
    """Random connected instance with its horizon set to ``T* + slack``."""
    n = rng.randint(*n_range)
    nodes = tuple(f"v{i}" for i in range(n))
    k = min(rng.randint(*k_range), n)
    terminals = rng.sample(nodes, k)
    n_src = rng.randint(1, k - 1)
    sources, sinks = terminals[:n_src], terminals[n_src:]
    pairs: set[tuple[str, str]] = set()
    balances = {v: 0 for v in nodes}

    def route(s, t):
        # Supply sent along a sampled path keeps every balance routable.
        inner = [v for v in nodes if v not in (s, t)]
        hops = rng.sample(inner, rng.randint(0, min(2, len(inner))))
        path = [s, *hops, t]
        pairs.update(zip(path, path[1:]))
        d = rng.randint(1, supply_max)
        balances[s] += d
        balances[t] -= d

    for s in sources:
        route(s, rng.choice(sinks))
    for t in sinks:
        if balances[t] == 0:
            route(rng.choice(sources), t)
    candidates = [(u, v) for u in nodes for v in nodes if u != v and (u, v) not in pairs]
    rng.shuffle(candidates)
    extra = max(0, min(m_max - len(pairs), rng.randint(0, n)))
    pairs.update(candidates[:extra])
    arcs = tuple(
        Arc(i, u, v, rng.randint(*cap_range), rng.randint(*transit_range))
        for i, (u, v) in enumerate(sorted(pairs, key=lambda p: (nodes.index(p[0]), nodes.index(p[1]))))
    )
    balances = {v: b for v, b in balances.items() if b}
    inst = TransshipmentInstance(DynamicNetwork(nodes, arcs), balances)
    T = min_horizon(inst)
    return inst.with_horizon(T + rng.randint(0, slack_max))


def corpus(seed: int, count: int, **kwargs) -> list[TransshipmentInstance]:
    rng = random.Random(seed)
    return [random_instance(rng, **kwargs) for _ in range(count)]
