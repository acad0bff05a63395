"""Capacity- and transit-parametric instances and their parametric searches.

A context fixes two tight terminal sets ``Q < R``, a drained terminal in
``R - Q`` and the node it is attached to. For a parameter value ``p`` a new
filled terminal is attached to the same node, through an arc of capacity
``p`` and transit 0 (``alpha``) or capacity 1 and transit ``p`` (``delta``),
and the amount ``shift(p)`` of supply or demand is moved from the drained to
the filled terminal.

Feasibility of ``p`` only needs the restricted function on ``R - Q``:

* source case: ``restricted(p, X) = v_p(Q + filled + X)``
* sink case:   ``restricted(p, X) = v_p(Q + X)``

Both the capacity and the transit parameter make the restricted function
monotone, and consecutive functions form strong maps, so minimal minimizers
along the search form a chain. For sources the chain shrinks as the search
proceeds; for sinks the relation is reversed and it grows.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable

from .model import (
    SINK,
    SOURCE,
    Arc,
    ContractError,
    DynamicNetwork,
    Provenance,
    TransshipmentInstance,
)
from .outflow import OutflowOracle, capacity_bound
from .sfm import SetFunction, minimize

ALPHA = "alpha"
DELTA = "delta"


@dataclass(frozen=True)
class ParametricContext:
    instance: TransshipmentInstance
    Q: frozenset[str]
    R: frozenset[str]
    drained: str
    kind: str
    param: str
    attachment: str
    filled: str

    @property
    def domain(self) -> tuple[str, ...]:
        return tuple(t for t in self.instance.terminals if t in self.R and t not in self.Q)

    @property
    def search_domain(self) -> tuple[str, ...]:
        """Domain of the searches: the drained terminal is fixed, outside the
        set in the source case and inside it in the sink case. Violated sets
        always have this shape, and only on it does the strong map hold."""
        return tuple(t for t in self.domain if t != self.drained)

    @property
    def anchor(self) -> frozenset[str]:
        return frozenset({self.drained}) if self.kind == SINK else frozenset()

    @property
    def horizon(self) -> int:
        return self.instance.require_horizon()


@dataclass(frozen=True)
class ParametricValue:
    kind: str
    value: int


def fresh_terminal_name(instance: TransshipmentInstance, base: str) -> tuple[str, int]:
    existing = set(instance.network.nodes)
    gen = 1 + sum(
        1 for p in instance.provenance.values() if p.role == "filled" and p.original == base
    )
    name = f"{base}^{gen}"
    while name in existing:
        gen += 1
        name = f"{base}^{gen}"
    return name, gen


def make_context(
    instance: TransshipmentInstance,
    Q,
    R,
    drained: str,
    param: str,
    oracle: OutflowOracle | None = None,
    filled: str | None = None,
) -> ParametricContext:
    """Validate the preconditions and build a context."""
    Q, R = frozenset(Q), frozenset(R)
    if param not in (ALPHA, DELTA):
        raise ContractError(f"unknown parameter kind {param!r}")
    if not Q < R:
        raise ContractError("Q must be a proper subset of R")
    if drained not in R or drained in Q:
        raise ContractError("drained terminal must lie in R - Q")
    prov = instance.provenance.get(drained)
    if prov is None or prov.role != "drained":
        raise ContractError(f"{drained!r} is not a drained terminal")
    kind = instance.kind(drained)
    oracle = oracle or OutflowOracle(instance)
    if oracle.violation(Q) != 0 or oracle.violation(R) != 0:
        raise ContractError("Q and R must be tight")
    if kind == SOURCE and oracle.violation(Q | {drained}) == 0:
        raise ContractError("Q + drained is already tight")
    if kind == SINK and oracle.violation(R - {drained}) == 0:
        raise ContractError("R - drained is already tight")
    if filled is None:
        filled, _ = fresh_terminal_name(instance, prov.original)
    return ParametricContext(instance, Q, R, drained, kind, param, prov.original, filled)


def alpha_max(ctx: ParametricContext) -> int:
    """Upper end of the capacity range.

    ``n * U_max`` over the original network, raised if needed to the total
    capacity at the attachment node so that the value is always large
    enough to make the new arc non-binding.
    """
    inst = ctx.instance
    originals = set(inst.original_nodes())
    finite = [
        a.capacity
        for a in inst.network.arcs
        if not a.infinite and a.tail in originals and a.head in originals
    ]
    u_max = max(finite) if finite else inst.total_supply()
    bound = capacity_bound(inst)
    s = ctx.attachment
    if ctx.kind == SOURCE:
        incident = [a for a in inst.network.arcs if a.tail == s and a.head in originals]
    else:
        incident = [a for a in inst.network.arcs if a.head == s and a.tail in originals]
    saturation = sum(min(a.capacity, bound) for a in incident)
    return max(len(originals) * u_max, saturation, 1)


def parameter_range(ctx: ParametricContext) -> tuple[int, int]:
    if ctx.param == ALPHA:
        return 0, alpha_max(ctx)
    return 0, ctx.horizon


def _extend(ctx: ParametricContext, p: int) -> TransshipmentInstance:
    inst = ctx.instance
    net = inst.network
    arc_id = net.next_arc_id()
    if ctx.param == ALPHA:
        cap, transit = p, 0
    else:
        cap, transit = 1, p
    if ctx.kind == SOURCE:
        arc = Arc(arc_id, ctx.filled, ctx.attachment, cap, transit)
    else:
        arc = Arc(arc_id, ctx.attachment, ctx.filled, cap, transit)
    network = DynamicNetwork(net.nodes + (ctx.filled,), net.arcs + (arc,))
    kinds = dict(inst.kinds)
    kinds[ctx.filled] = ctx.kind
    prov = dict(inst.provenance)
    _, gen = fresh_terminal_name(inst, ctx.attachment)
    prov[ctx.filled] = Provenance(ctx.attachment, "filled", gen, ctx.param, p)
    balances = dict(inst.balances)
    balances[ctx.filled] = 0
    return TransshipmentInstance(network, balances, inst.horizon, kinds, prov)


def build_parametric_instance(
    ctx: ParametricContext, p: int | ParametricValue
) -> tuple[TransshipmentInstance, str, int]:
    """Return ``(instance, filled terminal, shift)`` for parameter ``p``."""
    inst, _, shift, _ = _build(ctx, p)
    return inst, ctx.filled, shift


def _build(ctx: ParametricContext, p):
    if isinstance(p, ParametricValue):
        if p.kind != ctx.param:
            raise ContractError(f"parameter kind {p.kind} does not match {ctx.param}")
        p = p.value
    lo, hi = (0, None) if ctx.param == ALPHA else (0, ctx.horizon)
    if p < lo or hi is not None and p > hi:
        raise ContractError(f"parameter {p} outside range")
    base = _extend(ctx, p)
    oracle = OutflowOracle(base)
    if ctx.kind == SOURCE:
        shift = oracle.outflow(ctx.Q | {ctx.filled}) - oracle.outflow(ctx.Q)
    else:
        shift = oracle.outflow(ctx.R | {ctx.filled}) - oracle.outflow(ctx.R)
    balances = dict(base.balances)
    balances[ctx.filled] = shift
    balances[ctx.drained] = balances[ctx.drained] - shift
    inst = replace(base, balances=balances)
    return inst, ctx.filled, shift, oracle.rebind(inst)


class ParametricFamily:
    """Lazily built parametric instances with shared out-flow caches."""

    def __init__(self, ctx: ParametricContext):
        self.ctx = ctx
        self._members: dict[int, tuple[TransshipmentInstance, int, OutflowOracle]] = {}

    def member(self, p: int) -> tuple[TransshipmentInstance, int, OutflowOracle]:
        if p not in self._members:
            inst, _, shift, oracle = _build(self.ctx, p)
            self._members[p] = (inst, shift, oracle)
        return self._members[p]

    def instance(self, p: int) -> TransshipmentInstance:
        return self.member(p)[0]

    def shift(self, p: int) -> int:
        return self.member(p)[1]

    def full_set(self, X) -> frozenset[str]:
        X = frozenset(X)
        extra = X - set(self.ctx.domain)
        if extra:
            raise ContractError(f"outside the restricted domain: {sorted(extra)}")
        if self.ctx.kind == SOURCE:
            return self.ctx.Q | {self.ctx.filled} | X
        return self.ctx.Q | X

    def restricted(self, p: int, X) -> int:
        return self.member(p)[2].violation(self.full_set(X))

    def restricted_function(self, p: int, base=frozenset(), ground=None) -> SetFunction:
        """Restricted function at ``p`` as a set function of ``Z`` over ``ground``,
        evaluated at ``base | Z``."""
        ground = self.ctx.domain if ground is None else ground
        base = frozenset(base)
        return SetFunction(ground, lambda Z: self.restricted(p, base | Z))

    def search_function(self, p: int, base=frozenset(), ground=None) -> SetFunction:
        """Like ``restricted_function`` on the search domain, with the anchor added."""
        ground = self.ctx.search_domain if ground is None else ground
        return self.restricted_function(p, self.ctx.anchor | frozenset(base), ground)

    @property
    def mcf_calls(self) -> int:
        return sum(oracle.mcf_calls for _, _, oracle in self._members.values())


def restricted_v(ctx: ParametricContext, p, X) -> int:
    if isinstance(p, ParametricValue):
        p = p.value
    return ParametricFamily(ctx).restricted(p, X)


@dataclass
class SearchStats:
    strategy: str
    param: str
    kind: str
    optimum: int | None = None
    iterations: int = 0
    sfm_calls: int = 0
    mcf_calls: int = 0
    ground_size: int = 0
    range_max: int = 0
    trace: list[dict] = field(default_factory=list)
    final_minimizer: frozenset[str] = frozenset()


def _minimal_minimizer(fam: ParametricFamily, p: int, base, ground, stats: SearchStats):
    f = fam.search_function(p, base, ground)
    result = minimize(f)
    stats.sfm_calls += 1
    return fam.ctx.anchor | frozenset(base) | result.minimal.names(), result.value


def strong_map_search(ctx: ParametricContext, family: ParametricFamily | None = None):
    """Jump/check parametric search; returns ``(optimum, stats)``."""
    fam = family or ParametricFamily(ctx)
    lo, hi = parameter_range(ctx)
    domain = ctx.search_domain
    stats = SearchStats("strong-map", ctx.param, ctx.kind, ground_size=len(domain), range_max=hi)
    maximize = ctx.param == ALPHA
    shrinks = ctx.kind == SOURCE
    p = hi if maximize else lo
    X, value = _minimal_minimizer(fam, p, frozenset(), domain, stats)
    stats.trace.append({"p": p, "X": sorted(X), "value": value})
    while fam.restricted(p, X) < 0:
        stats.iterations += 1
        if stats.iterations > len(domain) + 1:
            raise AssertionError("parametric search exceeded its iteration bound")
        # Jump: extreme parameter at which the current minimizer is no longer violated.
        ok: Callable[[int], bool] = lambda q, X=X: fam.restricted(q, X) >= 0
        if maximize:
            if not ok(lo):
                raise ContractError("alpha = 0 is infeasible; the base instance is corrupt")
            p = _max_true(ok, lo, p - 1)
        else:
            if not ok(hi):
                raise ContractError("delta = T is infeasible; the base instance is corrupt")
            p = _min_true(ok, p + 1, hi)
        # Check: the next minimizer is nested in (or contains) the previous one.
        if shrinks:
            new_X, value = _minimal_minimizer(fam, p, frozenset(), tuple(t for t in domain if t in X), stats)
        else:
            new_X, value = _minimal_minimizer(fam, p, X, tuple(t for t in domain if t not in X), stats)
        if value < 0 and (new_X == X or not (new_X < X if shrinks else X < new_X)):
            raise AssertionError("minimizer chain failed to be strictly nested")
        X = new_X
        stats.trace.append({"p": p, "X": sorted(X), "value": value})
    stats.optimum = p
    stats.final_minimizer = X
    stats.mcf_calls = fam.mcf_calls
    return p, stats


def maximize_alpha(ctx: ParametricContext, family: ParametricFamily | None = None):
    if ctx.param != ALPHA:
        raise ContractError("maximize_alpha needs an alpha context")
    return strong_map_search(ctx, family)


def minimize_delta(ctx: ParametricContext, family: ParametricFamily | None = None):
    if ctx.param != DELTA:
        raise ContractError("minimize_delta needs a delta context")
    return strong_map_search(ctx, family)


def restricted_feasible(fam: ParametricFamily, p: int, stats: SearchStats | None = None) -> bool:
    f = fam.search_function(p)
    value = minimize(f).value
    if stats is not None:
        stats.sfm_calls += 1
    return value >= 0


def baseline_search(ctx: ParametricContext, family: ParametricFamily | None = None):
    """Plain binary search with one restricted minimization per probe."""
    fam = family or ParametricFamily(ctx)
    lo, hi = parameter_range(ctx)
    stats = SearchStats("baseline", ctx.param, ctx.kind, ground_size=len(ctx.search_domain), range_max=hi)
    feasible = lambda q: restricted_feasible(fam, q, stats)
    if ctx.param == ALPHA:
        p = _max_true(feasible, lo, hi, lo_known=True)
    else:
        p = _min_true(feasible, lo, hi, hi_known=True)
    stats.optimum = p
    stats.mcf_calls = fam.mcf_calls
    return p, stats


def _max_true(pred, lo: int, hi: int, lo_known: bool = True) -> int:
    """Largest q in [lo, hi] with pred(q), for pred true up to a threshold."""
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if pred(mid):
            lo = mid
        else:
            hi = mid - 1
    return lo


def _min_true(pred, lo: int, hi: int, hi_known: bool = True) -> int:
    """Smallest q in [lo, hi] with pred(q), for pred true from a threshold on."""
    while lo < hi:
        mid = (lo + hi) // 2
        if pred(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo
