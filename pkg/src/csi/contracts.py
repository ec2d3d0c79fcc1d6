"""Assume/guarantee contracts checked by rewriting to STL.

Two readings of a contract (assumption, guarantee) are supported:

* classical: ``(always assumption) -> (always guarantee)``
* refined:   ``always ((historically[0,T] assumption) -> guarantee)``

The refined reading only excuses a guarantee violation when the assumption
held throughout the preceding ``T`` seconds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .stl import (
    Always,
    Formula,
    Historically,
    Implies,
    Interval,
    Trace,
    robustness,
    robustness_signal,
)
from .stl.robustness import WindowError, window_offsets


@dataclass(frozen=True)
class Contract:
    assumption: Formula
    guarantee: Formula
    window_T: float = 0.0

    def __post_init__(self):
        if not (self.window_T >= 0 and math.isfinite(self.window_T)):
            raise ValueError(f"window_T must be finite and >= 0, got {self.window_T}")


@dataclass(frozen=True)
class ContractReport:
    classical_robustness: float
    refined_robustness: float
    classical_verdict: bool
    refined_verdict: bool
    assumption_violation_time: Optional[int]
    guarantee_violation_time: Optional[int]

    @property
    def diverges(self) -> bool:
        return self.classical_verdict != self.refined_verdict

    def to_dict(self) -> dict:
        return {
            "classical_robustness": self.classical_robustness,
            "refined_robustness": self.refined_robustness,
            "classical_verdict": self.classical_verdict,
            "refined_verdict": self.refined_verdict,
            "assumption_violation_time": self.assumption_violation_time,
            "guarantee_violation_time": self.guarantee_violation_time,
        }


def classical(c: Contract) -> Formula:
    return Implies(Always(c.assumption), Always(c.guarantee))


def refined(c: Contract) -> Formula:
    return Always(Implies(Historically(c.assumption, Interval.closed(0.0, c.window_T)), c.guarantee))


def first_violation(phi: Formula, w: Trace) -> Optional[int]:
    """Earliest sample where ``phi`` has strictly negative robustness."""
    hits = np.flatnonzero(robustness_signal(phi, w) < 0)
    return int(hits[0]) if hits.size else None


def evaluate(c: Contract, w: Trace) -> ContractReport:
    # Raises early with a clear message when T does not sit on the sample grid.
    window_offsets(Interval.closed(0.0, c.window_T), w.dt, len(w))
    rho_classical = robustness(classical(c), w, 0)
    rho_refined = robustness(refined(c), w, 0)
    return ContractReport(
        classical_robustness=rho_classical,
        refined_robustness=rho_refined,
        classical_verdict=rho_classical >= 0,
        refined_verdict=rho_refined >= 0,
        assumption_violation_time=first_violation(c.assumption, w),
        guarantee_violation_time=first_violation(c.guarantee, w),
    )


__all__ = [
    "Contract",
    "ContractReport",
    "WindowError",
    "classical",
    "evaluate",
    "first_violation",
    "refined",
]
