"""Integral static flows: min-cost circulation and maximum flow.

Nodes are integers ``0..n-1``. Arcs are added in order and their index is
their id; shortest-path ties are broken towards the smaller arc id because
arcs are scanned in insertion order and labels only change on strict
improvement.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass


@dataclass
class StaticFlow:
    flow: list[int]
    cost: int = 0
    value: int = 0


class StaticGraph:
    def __init__(self, n: int = 0):
        self.n = n
        self.tails: list[int] = []
        self.heads: list[int] = []
        self.caps: list[int] = []
        self.costs: list[int] = []

    def add_node(self) -> int:
        self.n += 1
        return self.n - 1

    def add_arc(self, tail: int, head: int, capacity: int, cost: int = 0) -> int:
        if capacity < 0:
            raise ValueError("negative capacity")
        self.tails.append(tail)
        self.heads.append(head)
        self.caps.append(capacity)
        self.costs.append(cost)
        return len(self.tails) - 1

    @property
    def m(self) -> int:
        return len(self.tails)

    def flow_cost(self, flow: list[int]) -> int:
        return sum(c * x for c, x in zip(self.costs, flow))


class _Residual:
    """Paired forward/backward residual arcs; arc 2i is forward for arc i."""

    def __init__(self, n: int):
        self.adj: list[list[int]] = [[] for _ in range(n)]
        self.to: list[int] = []
        self.cap: list[int] = []
        self.cost: list[int] = []

    def add(self, u: int, v: int, cap: int, cost: int) -> int:
        e = len(self.to)
        self.to += [v, u]
        self.cap += [cap, 0]
        self.cost += [cost, -cost]
        self.adj[u].append(e)
        self.adj[v].append(e + 1)
        return e

    def push(self, e: int, amount: int) -> None:
        self.cap[e] -= amount
        self.cap[e ^ 1] += amount


def min_cost_circulation(graph: StaticGraph) -> StaticFlow:
    """Minimum-cost integral circulation.

    Negative-cost arcs are saturated up front; the resulting node
    imbalances are then repaired by successive shortest paths with
    potentials. Requires that no negative cycle exists among the
    nonnegative-cost arcs alone (trivially true).
    """
    n = graph.n
    flow = [0] * graph.m
    excess = [0] * (n + 2)
    res = _Residual(n + 2)
    edge_of = []
    for i in range(graph.m):
        u, v, cap, c = graph.tails[i], graph.heads[i], graph.caps[i], graph.costs[i]
        if c < 0:
            # Saturate and expose the reverse as a positive-cost residual arc.
            e = res.add(v, u, cap, -c)
            edge_of.append((e, True))
            flow[i] = cap
            excess[v] += cap
            excess[u] -= cap
        else:
            e = res.add(u, v, cap, c)
            edge_of.append((e, False))
    src, dst = n, n + 1
    need = 0
    for v in range(n):
        if excess[v] > 0:
            res.add(src, v, excess[v], 0)
            need += excess[v]
        elif excess[v] < 0:
            res.add(v, dst, -excess[v], 0)
    if need:
        _successive_shortest_paths(res, src, dst, need)
    for i, (e, flipped) in enumerate(edge_of):
        carried = res.cap[e ^ 1]
        flow[i] = graph.caps[i] - carried if flipped else carried
    return StaticFlow(flow, graph.flow_cost(flow))


def _successive_shortest_paths(res: _Residual, src: int, dst: int, need: int) -> int:
    n = len(res.adj)
    pot = [0] * n
    sent = 0
    big = float("inf")
    while sent < need:
        dist = [big] * n
        pred = [-1] * n
        dist[src] = 0
        heap = [(0, src)]
        while heap:
            d, u = heapq.heappop(heap)
            if d > dist[u]:
                continue
            pu = pot[u]
            for e in res.adj[u]:
                if res.cap[e] <= 0:
                    continue
                v = res.to[e]
                nd = d + res.cost[e] + pu - pot[v]
                if nd < dist[v]:
                    dist[v] = nd
                    pred[v] = e
                    heapq.heappush(heap, (nd, v))
        if dist[dst] == big:
            raise RuntimeError("circulation repair failed: excess cannot be routed")
        for v in range(n):
            if dist[v] < big:
                pot[v] += dist[v]
        amount = need - sent
        v = dst
        while v != src:
            e = pred[v]
            amount = min(amount, res.cap[e])
            v = res.to[e ^ 1]
        v = dst
        while v != src:
            e = pred[v]
            res.push(e, amount)
            v = res.to[e ^ 1]
        sent += amount
    return sent


def max_flow(graph: StaticGraph, source: int, sink: int) -> StaticFlow:
    """Maximum integral source-sink flow (Dinic)."""
    n = graph.n
    res = _Residual(n)
    edges = [res.add(graph.tails[i], graph.heads[i], graph.caps[i], 0) for i in range(graph.m)]
    total = 0
    if source != sink:
        while True:
            level = [-1] * n
            level[source] = 0
            q = deque([source])
            while q:
                u = q.popleft()
                for e in res.adj[u]:
                    if res.cap[e] > 0 and level[res.to[e]] < 0:
                        level[res.to[e]] = level[u] + 1
                        q.append(res.to[e])
            if level[sink] < 0:
                break
            it = [0] * n
            while True:
                pushed = _dinic_dfs(res, level, it, source, sink)
                if not pushed:
                    break
                total += pushed
    flow = [res.cap[e ^ 1] for e in edges]
    return StaticFlow(flow, graph.flow_cost(flow), total)


def _dinic_dfs(res: _Residual, level: list[int], it: list[int], s: int, t: int) -> int:
    # Iterative blocking-flow search for one augmenting path.
    stack = [s]
    path: list[int] = []
    while stack:
        u = stack[-1]
        if u == t:
            amount = min(res.cap[e] for e in path)
            for e in path:
                res.push(e, amount)
            return amount
        adj = res.adj[u]
        advanced = False
        while it[u] < len(adj):
            e = adj[it[u]]
            v = res.to[e]
            if res.cap[e] > 0 and level[v] == level[u] + 1:
                stack.append(v)
                path.append(e)
                advanced = True
                break
            it[u] += 1
        if not advanced:
            level[u] = -1
            stack.pop()
            if path:
                path.pop()
                it[stack[-1]] += 1
    return 0
