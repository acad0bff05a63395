"""Flow-over-time containers shared by the solver and the oracle.

Time is discrete: ``expanded[(a, theta)]`` is the constant inflow rate of arc
``a`` on ``[theta, theta + 1)``. Units entering at ``theta`` leave the arc at
``theta + transit``; they must do so before the horizon.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

FWD = "fwd"
BWD = "bwd"


class FlowFormatError(ValueError):
    pass


@dataclass(frozen=True)
class PathFlow:
    arcs: tuple[tuple[int, str], ...]
    value: int
    start: int
    end: int


@dataclass
class FlowOverTime:
    horizon: int
    method: str = "lex-max"
    paths: list[PathFlow] = field(default_factory=list)
    expanded: dict[tuple[int, int], int] = field(default_factory=dict)

    def add(self, arc_id: int, theta: int, amount: int) -> None:
        key = (arc_id, theta)
        new = self.expanded.get(key, 0) + amount
        if new:
            self.expanded[key] = new
        else:
            self.expanded.pop(key, None)

    def total_on(self, arc_id: int) -> int:
        return sum(v for (a, _), v in self.expanded.items() if a == arc_id)

    def to_dict(self) -> dict:
        return {
            "horizon": self.horizon,
            "method": self.method,
            "paths": [
                {"arcs": [[a, d] for a, d in p.arcs], "value": p.value, "start": p.start, "end": p.end}
                for p in self.paths
            ],
            "expanded": [
                {"arc": a, "t": t, "flow": v} for (a, t), v in sorted(self.expanded.items())
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> FlowOverTime:
        try:
            flow = cls(int(data["horizon"]), str(data.get("method", "lex-max")))
            for p in data.get("paths", []):
                arcs = tuple((int(a), str(d)) for a, d in p["arcs"])
                flow.paths.append(PathFlow(arcs, int(p["value"]), int(p["start"]), int(p["end"])))
            for e in data.get("expanded", []):
                value = e["flow"]
                if not isinstance(value, int) or isinstance(value, bool):
                    raise FlowFormatError(f"non-integral flow value {value!r}")
                flow.add(int(e["arc"]), int(e["t"]), value)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, FlowFormatError):
                raise
            raise FlowFormatError(f"malformed flow: {exc!r}") from exc
        return flow


def save_flow(flow: FlowOverTime, path: str | Path) -> None:
    Path(path).write_text(json.dumps(flow.to_dict(), indent=1) + "\n")


def load_flow(path: str | Path) -> FlowOverTime:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FlowFormatError(f"{path}: {exc}") from exc
    if not isinstance(data, dict):
        raise FlowFormatError(f"{path}: top level must be an object")
    return FlowOverTime.from_dict(data)
