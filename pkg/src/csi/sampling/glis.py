"""Active sampler: RBF surrogate plus inverse-distance-weighting exploration.

The sampler minimises the observed robustness.  After ``n_initial`` uniformly
random points it fits an inverse-quadratic RBF surrogate to every evaluation
and proposes the minimiser of

    a(x) = fhat(x) - alpha * s(x) - delta * dF * z(x)

where ``s`` is the IDW spread of observed values around the surrogate, ``z``
rewards distance from existing samples and ``dF`` is the observed range.  All
distances are taken in the unit-normalised box.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .passive import halton_unit, uniform_random
from .space import ParameterSpace

FEEDBACK_CLAMP = 1e6
DUPLICATE_TOL = 1e-12
MIN_SEPARATION = 1e-9
REFINE_HALF_WIDTH = 0.05
GOLDEN_ITERATIONS = 30
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class DegenerateSamples(ValueError):
    pass


class Phase(enum.Enum):
    INITIAL_SAMPLING = "InitialSampling"
    ACTIVE_LEARNING = "ActiveLearning"


@dataclass(frozen=True)
class GlisConfig:
    n_initial: int = 10
    alpha: float = 1.0
    delta: float = 0.5
    eps_svd: float = 0.01
    rbf_epsilon: float = 0.2
    candidate_count: int = 1000
    seed: int = 0
    rbf_kind: str = "inverse_quadratic"

    def __post_init__(self):
        if self.n_initial < 1:
            raise ValueError("n_initial must be positive")
        if self.alpha < 0 or self.delta < 0:
            raise ValueError("alpha and delta must be non-negative")
        if not (self.eps_svd > 0 and self.rbf_epsilon > 0):
            raise ValueError("eps_svd and rbf_epsilon must be positive")
        if self.candidate_count < 1:
            raise ValueError("candidate_count must be positive")
        if self.rbf_kind != "inverse_quadratic":
            raise ValueError(f"unsupported basis function {self.rbf_kind!r}")


@dataclass
class EvaluatedSample:
    x: np.ndarray
    f: float
    index: int


@dataclass
class GlisState:
    config: GlisConfig
    space: ParameterSpace
    samples: list = field(default_factory=list)
    rbf_coefficients: Optional[np.ndarray] = None
    phase: Phase = Phase.INITIAL_SAMPLING
    evaluations: int = 0
    rng: np.random.Generator = None
    _candidates: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        if self.rng is None:
            self.rng = np.random.default_rng(self.config.seed)

    @property
    def nodes(self) -> np.ndarray:
        """Sample locations in unit coordinates, shape (n, d)."""
        return self.space.to_unit(np.array([s.x for s in self.samples])).reshape(len(self.samples), -1)

    @property
    def values(self) -> np.ndarray:
        return np.array([s.f for s in self.samples], dtype=float)

    def best(self) -> EvaluatedSample:
        return min(self.samples, key=lambda s: s.f)


def inverse_quadratic(r, epsilon: float):
    """Inverse-quadratic basis with length scale ``epsilon`` (unit-box units)."""
    return 1.0 / (1.0 + (np.asarray(r) / epsilon) ** 2)


def _pairwise(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.sqrt(((a[:, None, :] - b[None, :, :]) ** 2).sum(axis=-1))


def merge_duplicates(samples: list, space: ParameterSpace) -> list:
    """Collapse samples closer than 1e-12 (unit box); the later value wins."""
    merged: list = []
    for s in samples:
        u = space.to_unit(s.x)
        for k, m in enumerate(merged):
            if np.linalg.norm(space.to_unit(m.x) - u) < DUPLICATE_TOL:
                merged[k] = s
                break
        else:
            merged.append(s)
    return merged


def fit_surrogate(samples: list, cfg: GlisConfig, space: ParameterSpace) -> np.ndarray:
    """RBF coefficients solving ``M beta = F`` by truncated SVD.

    Singular values below ``eps_svd * sigma_max`` are dropped, so the fit
    only interpolates exactly when the kernel matrix is well conditioned.
    """
    if not samples:
        raise DegenerateSamples("cannot fit a surrogate without samples")
    merged = merge_duplicates(samples, space)
    if len(samples) > 1 and len(merged) == 1:
        raise DegenerateSamples("all sample points coincide")
    nodes = space.to_unit(np.array([s.x for s in merged])).reshape(len(merged), -1)
    F = np.array([s.f for s in merged], dtype=float)
    M = inverse_quadratic(_pairwise(nodes, nodes), cfg.rbf_epsilon)
    U, S, Vt = np.linalg.svd(M)
    keep = S >= cfg.eps_svd * S[0]
    return Vt[keep].T @ ((U[:, keep].T @ F) / S[keep])


def _surrogate_unit(state: GlisState, points: np.ndarray) -> np.ndarray:
    basis = inverse_quadratic(_pairwise(points, state.nodes), state.config.rbf_epsilon)
    return basis @ state.rbf_coefficients


def surrogate(state: GlisState, x) -> float:
    u = state.space.to_unit(x).reshape(1, -1)
    return float(_surrogate_unit(state, u)[0])


def _idw_unit(state: GlisState, points: np.ndarray, fhat: np.ndarray):
    nodes, F = state.nodes, state.values
    d2 = ((points[:, None, :] - nodes[None, :, :]) ** 2).sum(axis=-1)
    hit = np.sqrt(d2.min(axis=1)) < DUPLICATE_TOL
    with np.errstate(divide="ignore"):
        w = np.where(hit[:, None], 0.0, 1.0 / np.where(hit[:, None], 1.0, d2))
    wsum = w.sum(axis=1)
    safe = np.where(hit, 1.0, wsum)
    v = w / safe[:, None]
    s = np.sqrt((v * (F[None, :] - fhat[:, None]) ** 2).sum(axis=1))
    z = (2.0 / math.pi) * np.arctan(1.0 / safe)
    return np.where(hit, 0.0, s), np.where(hit, 0.0, z)


def idw_terms(state: GlisState, x) -> tuple[float, float]:
    """Exploration terms ``(s, z)`` at ``x``; both vanish at sampled points."""
    u = state.space.to_unit(x).reshape(1, -1)
    s, z = _idw_unit(state, u, _surrogate_unit(state, u))
    return float(s[0]), float(z[0])


def _acquisition_unit(state: GlisState, points: np.ndarray) -> np.ndarray:
    cfg = state.config
    F = state.values
    spread = max(1e-6, float(F.max() - F.min()))
    fhat = _surrogate_unit(state, points)
    s, z = _idw_unit(state, points, fhat)
    return fhat - cfg.alpha * s - cfg.delta * spread * z


def acquisition(state: GlisState, x) -> float:
    if state.phase is not Phase.ACTIVE_LEARNING:
        raise RuntimeError("acquisition is only defined in the active learning phase")
    u = state.space.to_unit(x).reshape(1, -1)
    return float(_acquisition_unit(state, u)[0])


def _golden_section(fun, lo: float, hi: float) -> float:
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = fun(c), fun(d)
    for _ in range(GOLDEN_ITERATIONS):
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = fun(d)
    return c if fc <= fd else d


def _separate(state: GlisState, u: np.ndarray) -> np.ndarray:
    nodes = state.nodes
    for _ in range(64):
        gaps = np.linalg.norm(nodes - u, axis=1)
        if gaps.min() >= MIN_SEPARATION:
            break
        # nudge towards the box centre, which always stays inside the box
        u = u + np.where(u < 0.5, 1.0, -1.0) * 1e-6
    return u


def propose(state: GlisState) -> np.ndarray:
    """Next point to evaluate: best Halton candidate, then a coordinate-wise golden-section polish."""
    if state.phase is not Phase.ACTIVE_LEARNING:
        raise RuntimeError("propose() needs the active learning phase")
    d = len(state.space)
    if state._candidates is None or len(state._candidates) != state.config.candidate_count:
        state._candidates = np.array([halton_unit(i, d) for i in range(1, state.config.candidate_count + 1)])
    cands = (state._candidates + state.rng.random(d)) % 1.0
    scores = _acquisition_unit(state, cands)
    best = cands[int(np.argmin(scores))].copy()
    best_score = float(scores.min())

    for j in range(d):
        lo = max(0.0, best[j] - REFINE_HALF_WIDTH)
        hi = min(1.0, best[j] + REFINE_HALF_WIDTH)

        def along(v, j=j):
            p = best.copy()
            p[j] = v
            return float(_acquisition_unit(state, p[None, :])[0])

        v = _golden_section(along, lo, hi)
        score = along(v)
        if score < best_score:
            best[j], best_score = v, score

    return state.space.from_unit(_separate(state, best))


def clamp_feedback(f: float) -> float:
    f = float(f)
    if math.isnan(f):
        raise ValueError("robustness feedback is NaN")
    return min(max(f, -FEEDBACK_CLAMP), FEEDBACK_CLAMP)


def update(state: GlisState, x, f: float) -> GlisState:
    """Record an evaluation, refit the surrogate and advance the phase."""
    x = np.asarray(x, dtype=float).copy()
    if x.shape != (len(state.space),):
        raise ValueError(f"point has shape {x.shape}, expected ({len(state.space)},)")
    tol = 1e-9 * state.space.width
    if np.any(x < state.space.lo - tol) or np.any(x > state.space.hi + tol):
        raise ValueError(f"point {x} lies outside the parameter box")
    sample = EvaluatedSample(x, clamp_feedback(f), state.evaluations)
    state.evaluations += 1
    state.samples = merge_duplicates(state.samples + [sample], state.space)
    state.rbf_coefficients = fit_surrogate(state.samples, state.config, state.space)
    if state.phase is Phase.INITIAL_SAMPLING and len(state.samples) >= state.config.n_initial:
        state.phase = Phase.ACTIVE_LEARNING
    return state


def next_point(state: GlisState) -> np.ndarray:
    if state.phase is Phase.INITIAL_SAMPLING:
        return uniform_random(state.rng, state.space)
    return propose(state)


def minimize(fun, space: ParameterSpace, budget: int, config: GlisConfig = GlisConfig()) -> GlisState:
    """Run the sampler for ``budget`` evaluations of ``fun`` and return the final state."""
    state = GlisState(config, space)
    for _ in range(budget):
        x = next_point(state)
        update(state, x, fun(x))
    return state
