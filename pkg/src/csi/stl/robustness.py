"""Discrete-time robustness of STL formulas over sampled traces.

Every formula is evaluated bottom-up into a robustness *signal* (one value per
sample).  Temporal windows are mapped to sample offsets ``round(b / dt)``; a
window running past either end of the trace only sees the available samples.
The inner infimum of ``until``/``since`` ranges over strictly intermediate
samples and is ``+inf`` when there are none.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .formula import (
    Always,
    And,
    Atom,
    BinOp,
    Const,
    Eventually,
    Formula,
    Historically,
    Implies,
    Interval,
    Neg,
    Not,
    Once,
    Or,
    Since,
    Term,
    TrueF,
    Until,
    Var,
    formula_vars,
    term_vars,
)
from .trace import Trace

INF = math.inf
DIVISION_EPS = 1e-12
WINDOW_TOLERANCE = 1e-9


class MonitorError(ValueError):
    pass


class UnknownVariable(MonitorError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown variable {name!r}")


class IndexOutOfRange(MonitorError, IndexError):
    pass


class OverlappingSets(MonitorError):
    pass


class TermEvaluationError(MonitorError):
    pass


class WindowError(MonitorError):
    pass


class InconsistentPair(MonitorError):
    pass


class Verdict(enum.Enum):
    VACUOUSLY_TRUE = "VacuouslyTrue"
    NONVACUOUSLY_TRUE = "NonvacuouslyTrue"
    NONVACUOUSLY_FALSE = "NonvacuouslyFalse"
    VACUOUSLY_FALSE = "VacuouslyFalse"
    BORDERLINE = "Borderline"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class IaSpec:
    """Interface-aware specification: input variables, output variables, formula."""

    inputs: frozenset
    outputs: frozenset
    formula: Formula

    def __post_init__(self):
        object.__setattr__(self, "inputs", frozenset(self.inputs))
        object.__setattr__(self, "outputs", frozenset(self.outputs))
        shared = self.inputs & self.outputs
        if shared:
            raise OverlappingSets(f"variables declared both input and output: {sorted(shared)}")


# --------------------------------------------------------------------------
# Terms


def eval_term(term: Term, trace: Trace) -> np.ndarray:
    """Evaluate ``term`` at every sample of ``trace``."""
    n = len(trace)
    if isinstance(term, Var):
        if not trace.has(term.name):
            raise UnknownVariable(term.name)
        return trace.column(term.name)
    if isinstance(term, Const):
        return np.full(n, term.value)
    if isinstance(term, Neg):
        return -eval_term(term.operand, trace)
    left = eval_term(term.left, trace)
    right = eval_term(term.right, trace)
    if term.op == "+":
        return left + right
    if term.op == "-":
        return left - right
    if term.op == "*":
        return left * right
    small = np.abs(right) < DIVISION_EPS
    if np.any(small):
        k = int(np.flatnonzero(small)[0])
        raise TermEvaluationError(f"division by {right[k]!r} at sample {k}")
    return left / right


# --------------------------------------------------------------------------
# Windows


def _offset(bound: float, dt: float) -> int:
    ratio = bound / dt
    k = round(ratio)
    if abs(ratio - k) > WINDOW_TOLERANCE * max(1.0, abs(k)):
        raise WindowError(f"window bound {bound} is not a multiple of the sample period {dt}")
    return int(k)


def window_offsets(interval: Interval, dt: float, n: int) -> tuple[int, int]:
    """Sample offsets ``(lo, hi)`` covered by ``interval``; ``hi < lo`` means empty."""
    lo = _offset(interval.lo, dt) + (0 if interval.lo_closed else 1)
    if interval.unbounded:
        hi = n - 1
    else:
        hi = _offset(interval.hi, dt) - (0 if interval.hi_closed else 1)
    return lo, min(hi, n - 1)


def _future_extremum(r: np.ndarray, lo: int, hi: int, take_max: bool) -> np.ndarray:
    n = len(r)
    empty = -INF if take_max else INF
    out = np.full(n, empty)
    if hi < lo or lo > n - 1:
        return out
    op = np.maximum if take_max else np.minimum
    if hi >= n - 1:
        suffix = op.accumulate(r[::-1])[::-1]
        out[: n - lo] = suffix[lo:]
        return out
    for k in range(lo, hi + 1):
        out[: n - k] = op(out[: n - k], r[k:])
    return out


def _past_extremum(r: np.ndarray, lo: int, hi: int, take_max: bool) -> np.ndarray:
    n = len(r)
    empty = -INF if take_max else INF
    out = np.full(n, empty)
    if hi < lo or lo > n - 1:
        return out
    op = np.maximum if take_max else np.minimum
    if hi >= n - 1:
        prefix = op.accumulate(r)
        out[lo:] = prefix[: n - lo]
        return out
    for k in range(lo, hi + 1):
        out[k:] = op(out[k:], r[: n - k])
    return out


def _until(r1: np.ndarray, r2: np.ndarray, lo: int, hi: int) -> np.ndarray:
    n = len(r1)
    out = np.full(n, -INF)
    inner = np.full(n, INF)  # inner[t] = min of r1 over t+1 .. t+k-1
    for k in range(0, hi + 1):
        if k >= 2:
            inner[: n - k + 1] = np.minimum(inner[: n - k + 1], r1[k - 1 :])
        if k >= lo:
            out[: n - k] = np.maximum(out[: n - k], np.minimum(r2[k:], inner[: n - k]))
    return out


def _since(r1: np.ndarray, r2: np.ndarray, lo: int, hi: int) -> np.ndarray:
    n = len(r1)
    out = np.full(n, -INF)
    inner = np.full(n, INF)  # inner[t] = min of r1 over t-k+1 .. t-1
    for k in range(0, hi + 1):
        if k >= 2:
            inner[k - 1 :] = np.minimum(inner[k - 1 :], r1[: n - k + 1])
        if k >= lo:
            out[k:] = np.maximum(out[k:], np.minimum(r2[: n - k], inner[k:]))
    return out


# --------------------------------------------------------------------------
# Evaluation


class _Evaluator:
    def __init__(self, trace: Trace, measured: frozenset, fixed: frozenset):
        self.trace = trace
        self.measured = measured
        self.fixed = fixed
        self.known = measured | fixed
        self.n = len(trace)

    def atom(self, phi: Atom) -> np.ndarray:
        names = term_vars(phi.term)
        if not names <= self.known:
            return np.zeros(self.n)
        values = eval_term(phi.term, self.trace)
        if not names <= self.fixed:
            return np.array(values, dtype=float)
        zero = INF if not phi.strict else -INF
        return np.where(values > 0, INF, np.where(values < 0, -INF, zero))

    def signal(self, phi: Formula) -> np.ndarray:
        if isinstance(phi, TrueF):
            return np.full(self.n, INF)
        if isinstance(phi, Atom):
            return self.atom(phi)
        if isinstance(phi, Not):
            return -self.signal(phi.arg)
        if isinstance(phi, Or):
            return np.maximum(self.signal(phi.left), self.signal(phi.right))
        if isinstance(phi, And):
            return np.minimum(self.signal(phi.left), self.signal(phi.right))
        if isinstance(phi, Implies):
            return np.maximum(-self.signal(phi.left), self.signal(phi.right))
        if isinstance(phi, (Eventually, Always)):
            lo, hi = window_offsets(phi.interval, self.trace.dt, self.n)
            return _future_extremum(self.signal(phi.arg), lo, hi, isinstance(phi, Eventually))
        if isinstance(phi, (Once, Historically)):
            lo, hi = window_offsets(phi.interval, self.trace.dt, self.n)
            return _past_extremum(self.signal(phi.arg), lo, hi, isinstance(phi, Once))
        if isinstance(phi, Until):
            lo, hi = window_offsets(phi.interval, self.trace.dt, self.n)
            return _until(self.signal(phi.left), self.signal(phi.right), lo, hi)
        if isinstance(phi, Since):
            lo, hi = window_offsets(phi.interval, self.trace.dt, self.n)
            return _since(self.signal(phi.left), self.signal(phi.right), lo, hi)
        raise TypeError(f"not a formula: {phi!r}")


def _check_vars(phi: Formula, trace: Trace):
    for name in sorted(formula_vars(phi)):
        if not trace.has(name):
            raise UnknownVariable(name)


def _check_index(trace: Trace, t_index: int):
    if not 0 <= t_index < len(trace):
        raise IndexOutOfRange(f"sample index {t_index} outside trace of length {len(trace)}")


def relative_signal(phi: Formula, trace: Trace, measured: Iterable[str], fixed: Iterable[str]) -> np.ndarray:
    """Robustness of ``phi`` measured on ``measured`` relative to ``fixed``, at every sample."""
    measured, fixed = frozenset(measured), frozenset(fixed)
    if measured & fixed:
        raise OverlappingSets(f"measured and fixed variables overlap: {sorted(measured & fixed)}")
    _check_vars(phi, trace)
    return _Evaluator(trace, measured, fixed).signal(phi)


def robustness_signal(phi: Formula, trace: Trace) -> np.ndarray:
    return relative_signal(phi, trace, trace.var_names, ())


def relative_robustness(phi: Formula, trace: Trace, t_index: int, measured, fixed) -> float:
    _check_index(trace, t_index)
    return float(relative_signal(phi, trace, measured, fixed)[t_index])


def robustness(phi: Formula, trace: Trace, t_index: int = 0) -> float:
    """Standard robustness: every trace variable measured, none held fixed."""
    _check_index(trace, t_index)
    return float(robustness_signal(phi, trace)[t_index])


def _check_spec(spec: IaSpec, trace: Trace):
    for name in sorted(spec.inputs | spec.outputs):
        if not trace.has(name):
            raise UnknownVariable(name)


def output_robustness(spec: IaSpec, trace: Trace, t_index: int = 0) -> float:
    _check_spec(spec, trace)
    others = [v for v in trace.var_names if v not in spec.outputs]
    return relative_robustness(spec.formula, trace, t_index, spec.outputs, others)


def input_vacuity(spec: IaSpec, trace: Trace, t_index: int = 0) -> float:
    _check_spec(spec, trace)
    return relative_robustness(spec.formula, trace, t_index, spec.inputs, ())


def classify(mu: float, nu: float) -> Verdict:
    """Map an (output robustness, input vacuity) pair to its verdict."""
    if mu == INF and nu > 0:
        return Verdict.VACUOUSLY_TRUE
    if mu == -INF and nu < 0:
        return Verdict.VACUOUSLY_FALSE
    if nu == 0 and math.isfinite(mu):
        if mu > 0:
            return Verdict.NONVACUOUSLY_TRUE
        if mu < 0:
            return Verdict.NONVACUOUSLY_FALSE
        if mu == 0:
            return Verdict.BORDERLINE
    raise InconsistentPair(f"(mu={mu}, nu={nu}) is not a row of the combination table")
