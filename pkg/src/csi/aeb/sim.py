"""1-D car following: an ego with distance-triggered emergency braking behind
a lead vehicle that brakes once, hard.

Once triggered the emergency brake stays on until the ego stands still, as a
production AEB would; commands reach the wheels after ``actuator_lag``.

Both vehicles are point masses integrated with explicit Euler at ``dt``.
Accelerations are logged as the value applied over the following step, so
``v[k+1] = v[k] + a[k] * dt`` holds up to a collision, after which both
vehicles are frozen in place.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..stl import Trace
from .rss import InvalidParams, RssParams, rss_safe_distance

CHANNELS = ("x_ego", "v_ego", "a_ego", "x_lead", "v_lead", "a_lead", "dist", "d_safe", "beta_lead")

BETA_RANGE = (1.5, 4.0)
JITTER_RANGE = (-1.0, 1.0)
DEFAULT_BETA = 2.0


@dataclass(frozen=True)
class ScenarioParams:
    safe_dist: float
    ego_speed: float

    def __post_init__(self):
        if not (math.isfinite(self.safe_dist) and self.safe_dist >= 0):
            raise InvalidParams(f"safe_dist must be finite and >= 0, got {self.safe_dist}")
        if not (math.isfinite(self.ego_speed) and self.ego_speed >= 0):
            raise InvalidParams(f"ego_speed must be finite and >= 0, got {self.ego_speed}")


def _steps(value: float, dt: float, name: str) -> int:
    k = round(value / dt)
    if abs(k * dt - value) > 1e-9 * max(1.0, abs(value)):
        raise InvalidParams(f"{name}={value} is not a multiple of dt={dt}")
    return k


@dataclass(frozen=True)
class SimConstants:
    init_dist: float = 30.0
    lead_speed: float = 10.0
    brake_delay: float = 4.0
    dt: float = 0.1
    horizon: float = 20.0
    ego_max_brake: float = 8.0
    vehicle_length: float = 4.5
    actuator_lag: float = 0.5
    speed_gain: float = 1.0

    def __post_init__(self):
        for name in ("init_dist", "lead_speed", "dt", "horizon", "ego_max_brake", "vehicle_length", "speed_gain"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise InvalidParams(f"{name} must be finite and positive, got {value}")
        for name in ("brake_delay", "actuator_lag"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise InvalidParams(f"{name} must be finite and >= 0, got {value}")
        _steps(self.horizon, self.dt, "horizon")
        _steps(self.actuator_lag, self.dt, "actuator_lag")
        # a brake_delay beyond the horizon just means the lead never brakes
        if self.brake_delay <= self.horizon:
            _steps(self.brake_delay, self.dt, "brake_delay")


@dataclass(frozen=True)
class NuisanceParams:
    """Implicit scenario variables the sampler never sees."""

    seed: int = 0
    enabled: bool = False
    lead_brake_decel: float = DEFAULT_BETA
    spawn_jitter: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.lead_brake_decel) and self.lead_brake_decel > 0):
            raise InvalidParams(f"lead_brake_decel must be positive, got {self.lead_brake_decel}")
        if not math.isfinite(self.spawn_jitter):
            raise InvalidParams("spawn_jitter must be finite")

    @classmethod
    def draw(cls, seed: int, enabled: bool = True) -> "NuisanceParams":
        """Nuisance values as a pure function of ``seed``."""
        if not enabled:
            return cls(seed=seed, enabled=False)
        rng = np.random.default_rng(seed)
        beta = float(rng.uniform(*BETA_RANGE))
        jitter = float(rng.uniform(*JITTER_RANGE))
        return cls(seed=seed, enabled=True, lead_brake_decel=beta, spawn_jitter=jitter)


def _apply(v: float, a: float, dt: float) -> float:
    # never integrate through zero speed; stop exactly at the end of the step
    return -v / dt if v + a * dt < 0 else a


def simulate(
    p: ScenarioParams,
    c: SimConstants = SimConstants(),
    n: NuisanceParams = NuisanceParams(),
    rss: RssParams = RssParams(),
) -> Trace:
    dt = c.dt
    steps = _steps(c.horizon, dt, "horizon")
    lag = _steps(c.actuator_lag, dt, "actuator_lag")
    brake_step = _steps(c.brake_delay, dt, "brake_delay") if c.brake_delay <= c.horizon else steps + 1

    out = np.zeros((steps + 1, len(CHANNELS)))
    x_e, v_e = 0.0, float(p.ego_speed)
    x_l, v_l = c.init_dist + n.spawn_jitter, float(c.lead_speed)
    # commands issued but not yet applied; the ego starts out cruising
    pending = [0.0] * lag
    crashed = False
    braking = False

    for k in range(steps + 1):
        gap = x_l - x_e - c.vehicle_length
        if crashed or gap <= 0:
            a_e = a_l = 0.0
            if crashed:
                v_e = v_l = 0.0
            crashed = True
        else:
            # the trigger uses centre-to-centre distance, like the scenario's proximity check
            braking = braking or x_l - x_e < p.safe_dist
            if braking:
                cmd = -c.ego_max_brake
            else:
                cmd = float(np.clip(c.speed_gain * (p.ego_speed - v_e), -c.ego_max_brake, rss.a_max_acc))
            pending.append(cmd)
            a_e = _apply(v_e, pending.pop(0), dt)
            a_l = _apply(v_l, -n.lead_brake_decel if k >= brake_step else 0.0, dt)

        out[k, :6] = (x_e, v_e, a_e, x_l, v_l, a_l)
        out[k, 6] = gap
        if not crashed:
            x_e, v_e = x_e + v_e * dt, max(0.0, v_e + a_e * dt)
            x_l, v_l = x_l + v_l * dt, max(0.0, v_l + a_l * dt)

    out[:, 7] = rss_safe_distance(out[:, 4], out[:, 1], rss)
    out[:, 8] = np.maximum(0.0, -out[:, 5])
    return Trace(CHANNELS, dt, out)
