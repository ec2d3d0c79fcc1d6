"""Longitudinal RSS safe distance and the shipped monitoring formulas.

Channels are signed (braking is a negative acceleration) while ``RssParams``
holds magnitudes, so the builders below do the sign bridging.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..stl import Formula, IaSpec, conjunction, parse
from ..stl.formula import format_number

INPUTS = frozenset({"v_lead", "a_lead", "beta_lead"})
OUTPUTS = frozenset({"v_ego", "a_ego"})


class InvalidParams(ValueError):
    pass


class NegativeVelocity(ValueError):
    pass


@dataclass(frozen=True)
class RssParams:
    tau: float = 0.5
    a_max_acc: float = 2.0
    a_min_br: float = 4.0
    a_max_br: float = 8.0

    def __post_init__(self):
        if not (self.tau >= 0 and math.isfinite(self.tau)):
            raise InvalidParams(f"tau must be finite and >= 0, got {self.tau}")
        if not (self.a_max_acc >= 0 and math.isfinite(self.a_max_acc)):
            raise InvalidParams(f"a_max_acc must be finite and >= 0, got {self.a_max_acc}")
        if not (0 < self.a_min_br <= self.a_max_br < math.inf):
            raise InvalidParams(f"need 0 < a_min_br <= a_max_br, got {self.a_min_br}, {self.a_max_br}")


def rss_safe_distance(v_front, v_back, rss: RssParams = RssParams()):
    """Minimum gap the back vehicle must keep, clamped at zero.

    Accepts scalars or arrays; returns the same shape.
    """
    vf = np.asarray(v_front, dtype=float)
    vb = np.asarray(v_back, dtype=float)
    if np.any(vf < 0) or np.any(vb < 0):
        raise NegativeVelocity(f"velocities must be non-negative, got front={v_front}, back={v_back}")
    tau = rss.tau
    d = (
        vb * tau
        + rss.a_max_acc * tau**2 / 2
        + (vb + rss.a_max_acc * tau) ** 2 / (2 * rss.a_min_br)
        - vf**2 / (2 * rss.a_max_br)
    )
    d = np.maximum(0.0, d)
    return float(d) if d.ndim == 0 else d


def _n(value: float) -> str:
    return format_number(float(value))


def rss_clauses(rss: RssParams = RssParams()) -> dict[str, Formula]:
    """The three always-clauses keyed by short names, over trace channels."""
    acc, max_br, min_br = _n(rss.a_max_acc), _n(-rss.a_max_br), _n(-rss.a_min_br)
    return {
        "velocity": parse("always ((v_lead >= 0) and (v_ego >= 0))"),
        "acceleration": parse(
            f"always ((a_lead >= {max_br}) and (a_lead <= {acc}) and (a_ego >= {max_br}) and (a_ego <= {acc}))"
        ),
        "guarantee": parse(f"always ((dist < d_safe) -> ((a_ego <= {min_br}) and (a_ego >= {max_br})))"),
    }


def rss_guarantee(rss: RssParams = RssParams()) -> Formula:
    """The distance clause alone: brake firmly whenever closer than d_safe."""
    return rss_clauses(rss)["guarantee"]


def rss_spec(rss: RssParams = RssParams()) -> IaSpec:
    clauses = rss_clauses(rss)
    return IaSpec(INPUTS, OUTPUTS, conjunction(*clauses.values()))


def assumption_spec(beta_max: float = 2.0) -> Formula:
    """Per-step bound on the lead vehicle's deceleration."""
    if not (beta_max > 0 and math.isfinite(beta_max)):
        raise InvalidParams(f"beta_max must be positive, got {beta_max}")
    return parse(f"{_n(beta_max)} - beta_lead >= 0")
