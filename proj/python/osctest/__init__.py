"""Oscillation tests for first-order equations with non-monotone deviating arguments."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from typing import Any, Sequence

from . import _osctest
from ._osctest import DomainError, InputError, NumericalError, RangeError

__all__ = [
    "CheckResult",
    "DomainError",
    "InputError",
    "NumericalError",
    "RangeError",
    "Simulation",
    "autonomous_lambda",
    "check",
    "kernel_a",
    "load",
    "plot_data",
    "simulate",
    "validate",
]

EXIT_CODES = {0: "OSCILLATORY", 1: "INPUT_ERROR", 2: "VALIDATION_FAILED", 3: "NOT_SIMULABLE", 10: "INCONCLUSIVE"}


def load(problem: Any) -> str:
    """Problem JSON text from a path, a dict or JSON text."""
    if isinstance(problem, dict):
        return json.dumps(problem)
    if isinstance(problem, os.PathLike) or (isinstance(problem, str) and not problem.lstrip().startswith("{")):
        with open(problem, encoding="utf-8") as f:
            return f.read()
    return problem


@dataclass
class CheckResult:
    exit_code: int
    report: dict

    @property
    def verdict(self) -> str:
        return self.report["overall"]["verdict"]

    def criterion(self, id: str, r: int | None = None) -> dict:
        for c in self.report["criteria"]:
            if c["id"] == id and (r is None or c["r"] == r):
                return c
        raise KeyError((id, r))


@dataclass
class Simulation:
    t: list
    x: list
    summary: dict


def check(problem, r_max=5, step=1e-3, window: Sequence[float] | None = None, margin=1e-6, period=None) -> CheckResult:
    code, report = _osctest.check(load(problem), r_max, step, tuple(window) if window else None, margin, period)
    return CheckResult(code, json.loads(report))


def simulate(problem, horizon=None, step=1e-3, history=None) -> Simulation:
    if history is not None and not isinstance(history, str):
        history = json.dumps(history)
    t, x, summary = _osctest.simulate(load(problem), horizon, step, history)
    return Simulation(t, x, json.loads(summary))


def kernel_a(problem, r, pairs, step=1e-3, span=None) -> list:
    return _osctest.kernel_a(load(problem), r, [tuple(p) for p in pairs], step, tuple(span) if span else None)


def autonomous_lambda(p: float, r: int) -> float:
    value, _ = _osctest.autonomous_lambda(p, r)
    return value


def validate(problem, window, step=1e-3) -> dict:
    return json.loads(_osctest.validate(load(problem), tuple(window), step))


def plot_data(path, csv_dir, r_max=2, step=1e-3, window=None) -> None:
    _osctest.plot_data(os.fspath(path), os.fspath(csv_dir), r_max, step, tuple(window) if window else None)
