"""Command-line driver.

Exit codes: 0 success, 1 negative answer (infeasible, verification
failure), 2 input error, 3 internal invariant failure.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .flows import FlowFormatError, FlowOverTime, load_flow, save_flow
from .generate import NoFeasibleHorizon, min_horizon, random_instance
from .lexmax import REDUCTION, TIME_EXPANDED, LexMaxError, lex_max_transshipment, project
from .model import ContractError, InstanceFormatError, TransshipmentInstance, load_instance, validate
from .parametric import baseline_search, strong_map_search
from .pipeline import BASELINE, STRONG_MAP, InvariantViolation, is_tight_order, lift, refine
from .sfm import GroundSetTooLarge, is_feasible
from .te_oracle import OracleSizeError, oracle_cap, verify

OK, NEGATIVE, INPUT_ERROR, INTERNAL_ERROR = 0, 1, 2, 3


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    instance: str | None = None
    horizon: int | None = None
    strategy: str = STRONG_MAP
    lexmax: str = REDUCTION
    seed: int = 0
    trace: bool = False
    out: str | None = None
    flow: str | None = None
    strict_conservation: bool = False
    count: int = 20


@dataclass
class SolveResult:
    flow: FlowOverTime
    horizon: int
    stats: dict = field(default_factory=dict)
    trace: list[dict] = field(default_factory=list)
    order: list[str] = field(default_factory=list)
    refined: TransshipmentInstance | None = None
    refined_flow: FlowOverTime | None = None


class Infeasible(Exception):
    def __init__(self, witness):
        super().__init__(f"infeasible, violated set {sorted(witness)}")
        self.witness = witness


def solve(
    instance: TransshipmentInstance,
    strategy: str = STRONG_MAP,
    lexmax_method: str = REDUCTION,
    trace_out=None,
) -> SolveResult:
    """Lift, refine, order, extract and project; verifies the result."""
    T = instance.horizon if instance.horizon is not None else min_horizon(instance)
    instance = instance.with_horizon(T)
    feas = is_feasible(instance)
    if not feas:
        raise Infeasible(feas.witness)
    lifted = lift(instance)
    refined = refine(lifted, strategy=strategy, trace_out=trace_out)
    order = refined.order
    final = refined.instance
    if not is_tight_order(final, order):
        raise InvariantViolation("returned order is not tight", refined.trace)
    flow, lx = lex_max_transshipment(final, order, method=lexmax_method)
    projected = project(flow, final, instance)
    stats = {
        "horizon": T,
        "iterations": len(refined.trace),
        "splits": sum(1 for r in refined.trace if r["branch"] == "split"),
        "sfm_calls": sum(s.sfm_calls for s in refined.searches),
        "mcf_calls": sum(s.mcf_calls for s in refined.searches),
        "lexmax_method": lx.method,
        "lexmax_mcf_calls": lx.mcf_calls,
        "terminals": len(final.terminals),
    }
    return SolveResult(projected, T, stats, refined.trace, order, final, flow)


# -- commands -----------------------------------------------------------------


def _load(cfg: RunConfig) -> TransshipmentInstance:
    if not cfg.instance:
        raise InputError("--instance is required")
    try:
        inst = load_instance(cfg.instance)
    except (OSError, InstanceFormatError) as exc:
        raise InputError(str(exc)) from exc
    problems = validate(inst)
    if problems:
        raise InputError("; ".join(problems))
    if cfg.horizon is not None:
        inst = inst.with_horizon(cfg.horizon)
    return inst


def cmd_validate(cfg: RunConfig) -> int:
    inst = _load(cfg)
    print(f"OK: {len(inst.network.nodes)} nodes, {len(inst.network.arcs)} arcs, "
          f"{len(inst.terminals)} terminals")
    return OK


def cmd_feasible(cfg: RunConfig) -> int:
    inst = _load(cfg)
    if inst.horizon is None:
        raise InputError("instance has no horizon; pass --horizon")
    res = is_feasible(inst)
    if res:
        print("FEASIBLE")
        return OK
    print(f"INFEASIBLE witness={json.dumps(sorted(res.witness))} violation={res.min_violation}")
    return NEGATIVE


def cmd_horizon(cfg: RunConfig) -> int:
    inst = _load(cfg)
    try:
        T = min_horizon(inst)
    except NoFeasibleHorizon as exc:
        print(f"INFEASIBLE: {exc}")
        return NEGATIVE
    print(T)
    return OK


def cmd_solve(cfg: RunConfig) -> int:
    inst = _load(cfg)
    try:
        result = solve(inst, cfg.strategy, cfg.lexmax, sys.stdout if cfg.trace else None)
    except Infeasible as exc:
        print(f"INFEASIBLE witness={json.dumps(sorted(exc.witness))}")
        return NEGATIVE
    except NoFeasibleHorizon as exc:
        print(f"INFEASIBLE: {exc}")
        return NEGATIVE
    except (InvariantViolation, LexMaxError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        for rec in getattr(exc, "trace", []):
            print(json.dumps(rec, sort_keys=True), file=sys.stderr)
        return INTERNAL_ERROR
    check = "skipped (over size cap)"
    try:
        problems = verify(result.flow, inst.with_horizon(result.horizon), strict=True)
        if problems:
            print("internal error: " + "; ".join(problems), file=sys.stderr)
            return INTERNAL_ERROR
        check = "ok"
    except OracleSizeError:
        pass
    if cfg.out:
        save_flow(result.flow, cfg.out)
    else:
        print(json.dumps(result.flow.to_dict(), sort_keys=True))
    s = result.stats
    print(
        f"T={s['horizon']} iterations={s['iterations']} splits={s['splits']} "
        f"sfm_calls={s['sfm_calls']} mcf_calls={s['mcf_calls']} "
        f"lexmax={s['lexmax_method']} lexmax_mcf_calls={s['lexmax_mcf_calls']} verify={check}"
    )
    return OK


def cmd_verify(cfg: RunConfig) -> int:
    inst = _load(cfg)
    if not cfg.flow:
        raise InputError("--flow is required")
    try:
        flow = load_flow(cfg.flow)
    except (OSError, FlowFormatError) as exc:
        raise InputError(str(exc)) from exc
    known = {a.id for a in inst.network.arcs}
    unknown = sorted({a for a, _ in flow.expanded if a not in known})
    if unknown or (inst.horizon is not None and inst.horizon != flow.horizon):
        raise InputError(f"flow does not belong to this instance (arcs {unknown}, horizon {flow.horizon})")
    problems = verify(flow, inst.with_horizon(flow.horizon), strict=cfg.strict_conservation)
    if problems:
        for p in problems:
            print(p)
        return NEGATIVE
    print("OK")
    return OK


def bench_rows(seed: int, count: int) -> list[dict]:
    """Run both strategies on every context the pipeline meets."""
    rng = random.Random(seed)
    rows = []
    for i in range(count):
        inst = random_instance(rng)
        contexts = []
        refine(lift(inst), on_context=contexts.append)
        for j, ctx in enumerate(contexts):
            for name, search in ((STRONG_MAP, strong_map_search), (BASELINE, baseline_search)):
                opt, st = search(ctx)
                rows.append({
                    "seed": seed, "instance": i, "context": j, "param": ctx.param,
                    "kind": ctx.kind, "strategy": name, "sfm_calls": st.sfm_calls,
                    "mcf_calls": st.mcf_calls, "iterations": st.iterations,
                    "optimum": opt, "ground_size": st.ground_size, "range": st.range_max,
                })
    return rows


def cmd_bench(cfg: RunConfig) -> int:
    from .report import render, write_csv

    rows = bench_rows(cfg.seed, cfg.count)
    for a, b in zip(rows[::2], rows[1::2]):
        if a["optimum"] != b["optimum"]:
            print(f"internal error: strategies disagree on {a}", file=sys.stderr)
            return INTERNAL_ERROR
    out = Path(cfg.out or "bench.csv")
    write_csv(rows, out)
    fig = render(rows, out.with_suffix(".png"))
    strong = [r for r in rows if r["strategy"] == STRONG_MAP]
    base = [r for r in rows if r["strategy"] == BASELINE]
    print(f"contexts={len(strong)} strong_map_sfm={sum(r['sfm_calls'] for r in strong)} "
          f"baseline_sfm={sum(r['sfm_calls'] for r in base)} csv={out} figure={fig}")
    return OK


COMMANDS = {
    "validate": cmd_validate,
    "feasible": cmd_feasible,
    "horizon": cmd_horizon,
    "solve": cmd_solve,
    "verify": cmd_verify,
    "bench": cmd_bench,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--instance", help="instance JSON file")
    common.add_argument("--horizon", type=int, help="override the time horizon")
    common.add_argument("--strategy", choices=[STRONG_MAP, BASELINE], default=STRONG_MAP)
    common.add_argument("--lexmax", choices=[REDUCTION, TIME_EXPANDED], default=REDUCTION)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trace", action="store_true", help="print refinement records as JSON lines")
    common.add_argument("--out", help="output path (flow JSON, or bench CSV)")
    common.add_argument("--flow", help="flow JSON to verify")
    common.add_argument("--strict-conservation", action="store_true",
                        help="forbid holdover at nodes that are not terminals")
    common.add_argument("--count", type=int, default=20, help="bench: number of instances")
    parser = argparse.ArgumentParser(
        prog="quickflow",
        description=f"Integral quickest transshipment (time-expansion cap {oracle_cap()} nodes).",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return INPUT_ERROR if exc.code else OK
    cfg = RunConfig(**{k: v for k, v in vars(args).items()})
    try:
        return COMMANDS[cfg.command](cfg)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except (ContractError, GroundSetTooLarge, OracleSizeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
