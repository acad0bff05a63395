"""Dynamic networks, transshipment instances and terminal sets.

Instances are immutable; every transformation (lifting, adding a filled
terminal, changing balances) returns a new object.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Iterator, Mapping

# Reserved value for arcs without a capacity bound. Any finite capacity
# must stay strictly below it.
U_INF = 2**62

SOURCE = "source"
SINK = "sink"


class ContractError(ValueError):
    """Raised when an operation is called outside its precondition."""


class InstanceFormatError(ValueError):
    """Raised for malformed instance files."""


@dataclass(frozen=True)
class Arc:
    id: int
    tail: str
    head: str
    capacity: int
    transit: int

    @property
    def infinite(self) -> bool:
        return self.capacity >= U_INF


@dataclass(frozen=True)
class DynamicNetwork:
    nodes: tuple[str, ...]
    arcs: tuple[Arc, ...]

    def arc(self, arc_id: int) -> Arc:
        return self._by_id[arc_id]

    @property
    def _by_id(self) -> dict[int, Arc]:
        cached = self.__dict__.get("_arc_index")
        if cached is None:
            cached = {a.id: a for a in self.arcs}
            object.__setattr__(self, "_arc_index", cached)
        return cached

    def next_arc_id(self) -> int:
        return max((a.id for a in self.arcs), default=-1) + 1

    def finite_capacity_total(self) -> int:
        return sum(a.capacity for a in self.arcs if not a.infinite)

    def max_finite_capacity(self) -> int:
        return max((a.capacity for a in self.arcs if not a.infinite), default=0)


@dataclass(frozen=True)
class Provenance:
    """Where an artificial terminal came from.

    ``role`` is ``"drained"`` for the twins added when lifting and
    ``"filled"`` for terminals created during refinement.
    """

    original: str
    role: str
    generation: int = 0
    param_kind: str | None = None
    param_value: int | None = None


@dataclass(frozen=True)
class TransshipmentInstance:
    network: DynamicNetwork
    balances: Mapping[str, int]
    horizon: int | None = None
    # Explicit terminal kinds. Needed once terminals may carry zero balance
    # (drained terminals after their supply moved elsewhere). When empty the
    # kinds are derived from balance signs in balance order.
    kinds: Mapping[str, str] = field(default_factory=dict)
    provenance: Mapping[str, Provenance] = field(default_factory=dict)

    @property
    def terminals(self) -> tuple[str, ...]:
        cached = self.__dict__.get("_terminals")
        if cached is None:
            if self.kinds:
                cached = tuple(self.kinds)
            else:
                cached = tuple(v for v, b in self.balances.items() if b != 0)
            object.__setattr__(self, "_terminals", cached)
        return cached

    def kind(self, v: str) -> str | None:
        if self.kinds:
            return self.kinds.get(v)
        b = self.balances.get(v, 0)
        if b > 0:
            return SOURCE
        if b < 0:
            return SINK
        return None

    @property
    def sources(self) -> tuple[str, ...]:
        return tuple(t for t in self.terminals if self.kind(t) == SOURCE)

    @property
    def sinks(self) -> tuple[str, ...]:
        return tuple(t for t in self.terminals if self.kind(t) == SINK)

    def balance(self, v: str) -> int:
        return self.balances.get(v, 0)

    def total_supply(self) -> int:
        return sum(b for b in self.balances.values() if b > 0)

    def with_horizon(self, horizon: int | None) -> TransshipmentInstance:
        return replace(self, horizon=horizon)

    def require_horizon(self, horizon: int | None = None) -> int:
        T = self.horizon if horizon is None else horizon
        if T is None:
            raise ContractError("instance has no time horizon")
        return T

    def original_nodes(self) -> tuple[str, ...]:
        return tuple(v for v in self.network.nodes if v not in self.provenance)

    def terminal_set(self, names: Iterable[str] = ()) -> TerminalSet:
        return TerminalSet.from_names(self.terminals, names)


class TerminalSet:
    """Subset of a fixed, ordered terminal list stored as a bitset."""

    __slots__ = ("universe", "bits")

    def __init__(self, universe: tuple[str, ...], bits: int = 0):
        if bits >> len(universe):
            raise ContractError("bit set outside the terminal universe")
        self.universe = universe
        self.bits = bits

    @classmethod
    def from_names(cls, universe: Iterable[str], names: Iterable[str]) -> TerminalSet:
        universe = tuple(universe)
        index = {t: i for i, t in enumerate(universe)}
        bits = 0
        for name in names:
            if name not in index:
                raise ContractError(f"{name!r} is not a terminal")
            bits |= 1 << index[name]
        return cls(universe, bits)

    def _same(self, other: TerminalSet) -> None:
        if self.universe != other.universe:
            raise ContractError("terminal sets over different universes")

    def __or__(self, other: TerminalSet) -> TerminalSet:
        self._same(other)
        return TerminalSet(self.universe, self.bits | other.bits)

    def __and__(self, other: TerminalSet) -> TerminalSet:
        self._same(other)
        return TerminalSet(self.universe, self.bits & other.bits)

    def __sub__(self, other: TerminalSet) -> TerminalSet:
        self._same(other)
        return TerminalSet(self.universe, self.bits & ~other.bits)

    def __le__(self, other: TerminalSet) -> bool:
        self._same(other)
        return self.bits & ~other.bits == 0

    def __lt__(self, other: TerminalSet) -> bool:
        return self <= other and self.bits != other.bits

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TerminalSet):
            return NotImplemented
        return self.universe == other.universe and self.bits == other.bits

    def __hash__(self) -> int:
        return hash((self.universe, self.bits))

    def __iter__(self) -> Iterator[str]:
        for i, t in enumerate(self.universe):
            if self.bits >> i & 1:
                yield t

    def __contains__(self, name: object) -> bool:
        try:
            i = self.universe.index(name)  # type: ignore[arg-type]
        except ValueError:
            return False
        return bool(self.bits >> i & 1)

    def __len__(self) -> int:
        return bin(self.bits).count("1")

    def names(self) -> frozenset[str]:
        return frozenset(self)

    def __repr__(self) -> str:
        return "{" + ", ".join(self) + "}"


def net_balance(instance: TransshipmentInstance, X: Iterable[str]) -> int:
    terminals = set(instance.terminals)
    total = 0
    for v in X:
        if v not in terminals:
            raise ContractError(f"{v!r} is not a terminal")
        total += instance.balance(v)
    return total


def validate(instance: TransshipmentInstance) -> list[str]:
    """Return the list of violated instance rules; empty means valid."""
    problems: list[str] = []
    net = instance.network
    nodes = set(net.nodes)
    if len(nodes) != len(net.nodes):
        problems.append("duplicate node identifiers")
    seen_ids: set[int] = set()
    for a in net.arcs:
        if a.id in seen_ids:
            problems.append(f"arc {a.id}: duplicate arc id")
        seen_ids.add(a.id)
        if a.tail not in nodes or a.head not in nodes:
            problems.append(f"arc {a.id}: endpoint not a node")
        if not isinstance(a.capacity, int) or isinstance(a.capacity, bool):
            problems.append(f"arc {a.id}: non-integral capacity")
        elif a.capacity < 0:
            problems.append(f"arc {a.id}: negative capacity")
        if not isinstance(a.transit, int) or isinstance(a.transit, bool):
            problems.append(f"arc {a.id}: non-integral transit")
        elif a.transit < 0:
            problems.append(f"arc {a.id}: negative transit")
    for v, b in instance.balances.items():
        if v not in nodes:
            problems.append(f"node {v!r}: balance on unknown node")
        if not isinstance(b, int) or isinstance(b, bool):
            problems.append(f"node {v!r}: non-integral balance")
    total = sum(instance.balances.values())
    if total != 0:
        problems.append(f"balances sum to {total} != 0")
    for v, kind in instance.kinds.items():
        b = instance.balance(v)
        if kind == SOURCE and b < 0 or kind == SINK and b > 0:
            problems.append(f"node {v!r}: {kind} with balance {b}")
    for v, b in instance.balances.items():
        if instance.kinds and b != 0 and v not in instance.kinds:
            problems.append(f"node {v!r}: nonzero balance but not a terminal")
    if instance.horizon is not None and (
        not isinstance(instance.horizon, int) or instance.horizon < 1
    ):
        problems.append(f"horizon {instance.horizon!r} is not a positive integer")
    return problems


# -- JSON ---------------------------------------------------------------------


def instance_from_dict(data: Mapping) -> TransshipmentInstance:
    try:
        nodes = tuple(str(v) for v in data["nodes"])
        arcs = []
        for i, raw in enumerate(data.get("arcs", [])):
            cap = raw["capacity"]
            if cap == "inf":
                cap = U_INF
            arcs.append(
                Arc(
                    id=int(raw.get("id", i)),
                    tail=str(raw["tail"]),
                    head=str(raw["head"]),
                    capacity=cap,
                    transit=raw["transit"],
                )
            )
        balances = {str(v): b for v, b in data.get("balances", {}).items()}
        horizon = data.get("horizon")
    except (KeyError, TypeError, AttributeError) as exc:
        raise InstanceFormatError(f"malformed instance: {exc!r}") from exc
    return TransshipmentInstance(DynamicNetwork(nodes, tuple(arcs)), balances, horizon)


def instance_to_dict(instance: TransshipmentInstance) -> dict:
    arcs = []
    for a in instance.network.arcs:
        arcs.append(
            {
                "id": a.id,
                "tail": a.tail,
                "head": a.head,
                "capacity": "inf" if a.infinite else a.capacity,
                "transit": a.transit,
            }
        )
    data = {
        "nodes": list(instance.network.nodes),
        "arcs": arcs,
        "balances": {v: b for v, b in instance.balances.items() if b != 0},
    }
    if instance.horizon is not None:
        data["horizon"] = instance.horizon
    return data


def load_instance(path: str | Path) -> TransshipmentInstance:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"{path}: {exc}") from exc
    if not isinstance(data, dict):
        raise InstanceFormatError(f"{path}: top level must be an object")
    return instance_from_dict(data)


def save_instance(instance: TransshipmentInstance, path: str | Path) -> None:
    Path(path).write_text(json.dumps(instance_to_dict(instance), indent=2) + "\n")


def example_i1(horizon: int | None = 4) -> TransshipmentInstance:
    """Path s -> v -> t, both arcs capacity 2 and transit 1, moving 4 units."""
    net = DynamicNetwork(
        ("s", "v", "t"),
        (Arc(0, "s", "v", 2, 1), Arc(1, "v", "t", 2, 1)),
    )
    return TransshipmentInstance(net, {"s": 4, "t": -4}, horizon)
