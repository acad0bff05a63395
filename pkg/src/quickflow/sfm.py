"""Exact submodular minimization by enumeration, and the feasibility test."""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Callable, Iterable

from .model import TerminalSet, TransshipmentInstance
from .outflow import OutflowOracle

ENUMERATION_CAP = 20


class GroundSetTooLarge(ValueError):
    pass


class NotSubmodularError(AssertionError):
    """The enumerated minimizers are not closed under union/intersection."""


class SetFunction:
    """Evaluation oracle over an ordered ground set, counting its calls."""

    def __init__(self, ground: Iterable[str], evaluator: Callable[[frozenset[str]], int]):
        self.ground = tuple(ground)
        self.evaluator = evaluator
        self.calls = 0
        self._lock = threading.Lock()

    def __call__(self, X: Iterable[str]) -> int:
        with self._lock:
            self.calls += 1
        return self.evaluator(frozenset(X))


@dataclass(frozen=True)
class SFMResult:
    value: int
    minimal: TerminalSet
    maximal: TerminalSet


def _subsets_by_popcount(k: int):
    # Increasing popcount, then increasing bitset value.
    return sorted(range(1 << k), key=lambda bits: (bin(bits).count("1"), bits))


def minimize(f: SetFunction, cap: int = ENUMERATION_CAP) -> SFMResult:
    ground = f.ground
    k = len(ground)
    if k > cap:
        raise GroundSetTooLarge(f"instance too large for exact SFM: {k} > {cap} elements")
    best = None
    argmins: list[int] = []
    for bits in _subsets_by_popcount(k):
        value = f(g for i, g in enumerate(ground) if bits >> i & 1)
        if best is None or value < best:
            best, argmins = value, [bits]
        elif value == best:
            argmins.append(bits)
    inter, union = argmins[0], 0
    for bits in argmins:
        inter &= bits
        union |= bits
    if inter != argmins[0] or union not in argmins:
        raise NotSubmodularError("minimizers are not closed under union and intersection")
    return SFMResult(best, TerminalSet(ground, inter), TerminalSet(ground, union))


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    min_violation: int
    witness: frozenset[str]

    def __bool__(self) -> bool:
        return self.feasible


def is_feasible(
    instance: TransshipmentInstance,
    horizon: int | None = None,
    oracle: OutflowOracle | None = None,
) -> FeasibilityResult:
    """Feasible iff no terminal set has negative violation.

    On infeasible instances the witness is the minimal minimizer.
    """
    if oracle is None:
        oracle = OutflowOracle(instance, horizon)
    f = SetFunction(instance.terminals, oracle.violation)
    result = minimize(f)
    return FeasibilityResult(result.value >= 0, result.value, result.minimal.names())
