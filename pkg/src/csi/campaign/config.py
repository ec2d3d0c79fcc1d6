"""Campaign configuration: JSON in, validated dataclasses out."""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from ..aeb import InvalidParams, RssParams, SimConstants
from ..contracts import Contract
from ..sampling import GlisConfig, ParameterSpace
from ..stl import ParseError, parse

class ConfigError(ValueError):
    pass


SAMPLER_KINDS = ("halton", "random", "glis")
SHIPPED_OBJECTIVES = ("rss_guarantee", "rss_spec")
SCENARIO_FIELDS = ("safe_dist", "ego_speed")
TOP_LEVEL_KEYS = {"space", "sampler", "sim", "rss", "nuisance", "objective", "contract", "seed", "save_traces"}


@dataclass(frozen=True)
class SamplerConfig:
    kind: str = "glis"
    budget: int = 70
    seed: int = 0
    glis: GlisConfig = GlisConfig()
    workers: int = 1


DEFAULT_ASSUMPTION = "2 - beta_lead >= 0"
DEFAULT_GUARANTEE = "(dist < d_safe) -> ((a_ego <= -4) and (a_ego >= -8))"


@dataclass(frozen=True)
class ContractConfig:
    """Per-step assumption and guarantee as spec text, plus the causality window."""

    assumption: str = DEFAULT_ASSUMPTION
    guarantee: str = DEFAULT_GUARANTEE
    T_seconds: float = 3.0

    def __post_init__(self):
        if not (math.isfinite(self.T_seconds) and self.T_seconds >= 0):
            raise ConfigError(f"T_seconds must be finite and >= 0, got {self.T_seconds}")
        for name in ("assumption", "guarantee"):
            try:
                parse(getattr(self, name))
            except ParseError as exc:
                raise ConfigError(f"{name}: {exc}") from None

    def contract(self) -> Contract:
        return Contract(parse(self.assumption), parse(self.guarantee), self.T_seconds)


@dataclass(frozen=True)
class CampaignConfig:
    space: ParameterSpace
    sampler: SamplerConfig = SamplerConfig()
    sim: SimConstants = SimConstants()
    rss: RssParams = RssParams()
    nuisance_enabled: bool = True
    objective: str = "rss_guarantee"
    contract: Optional[ContractConfig] = None
    seed: int = 0
    save_traces: bool = False

    def to_dict(self) -> dict:
        """Canonical JSON-ready form, also used as the config echo in results."""
        glis = dataclasses.asdict(self.sampler.glis)
        glis.pop("seed")
        glis.pop("rbf_kind")
        return {
            "space": {d.name: [d.lo, d.hi] for d in self.space.dims},
            "sampler": {
                "kind": self.sampler.kind,
                "budget": self.sampler.budget,
                "seed": self.sampler.seed,
                "glis": glis,
                "workers": self.sampler.workers,
            },
            "sim": dataclasses.asdict(self.sim),
            "rss": dataclasses.asdict(self.rss),
            "nuisance": {"enabled": self.nuisance_enabled},
            "objective": self.objective,
            "contract": dataclasses.asdict(self.contract) if self.contract else None,
            "seed": self.seed,
            "save_traces": self.save_traces,
        }


def _expect(value, kind, where: str):
    if kind is float:
        ok = isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)
        return float(value) if ok else _fail(f"{where}: expected a finite number, got {value!r}")
    if kind is int:
        ok = isinstance(value, int) and not isinstance(value, bool)
        return value if ok else _fail(f"{where}: expected an integer, got {value!r}")
    if kind is bool:
        return value if isinstance(value, bool) else _fail(f"{where}: expected true/false, got {value!r}")
    if kind is str:
        return value if isinstance(value, str) else _fail(f"{where}: expected a string, got {value!r}")
    if kind is dict:
        return value if isinstance(value, dict) else _fail(f"{where}: expected an object, got {value!r}")
    raise TypeError(kind)


_KINDS = {"int": int, "float": float, "str": str, "bool": bool}


def _fail(msg: str):
    raise ConfigError(msg)


def _block(cls, raw: dict, where: str, **overrides):
    """Build a frozen dataclass from a JSON object, checking field names and types."""
    raw = _expect(raw, dict, where)
    fields = {f.name: f for f in dataclasses.fields(cls)}
    kwargs = {}
    for key, value in raw.items():
        if key not in fields or key in overrides:
            _fail(f"{where}: unknown field {key!r}")
        kind = _KINDS.get(str(fields[key].type), float)
        kwargs[key] = _expect(value, kind, f"{where}.{key}")
    kwargs.update(overrides)
    try:
        return cls(**kwargs)
    except (InvalidParams, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from None


def _space(raw) -> ParameterSpace:
    raw = _expect(raw, dict, "space")
    if set(raw) != set(SCENARIO_FIELDS):
        _fail(f"space must define exactly {list(SCENARIO_FIELDS)}, got {sorted(raw)}")
    bounds = []
    for name, pair in raw.items():
        if not (isinstance(pair, list) and len(pair) == 2):
            _fail(f"space.{name}: expected [lo, hi]")
        lo, hi = (_expect(v, float, f"space.{name}") for v in pair)
        if not lo < hi:
            _fail(f"space.{name}: need lo < hi, got [{lo}, {hi}]")
        bounds.append((name, lo, hi))
    return ParameterSpace.from_bounds(bounds)


def _sampler(raw, seed: int) -> SamplerConfig:
    raw = dict(_expect(raw, dict, "sampler"))
    unknown = set(raw) - {"kind", "budget", "seed", "glis", "workers"}
    if unknown:
        _fail(f"sampler: unknown field(s) {sorted(unknown)}")
    kind = raw.get("kind", "glis")
    if kind not in SAMPLER_KINDS:
        _fail(f"sampler.kind must be one of {list(SAMPLER_KINDS)}, got {kind!r}")
    budget = _expect(raw.get("budget", 70), int, "sampler.budget")
    if budget < 1:
        _fail("sampler.budget must be positive")
    sampler_seed = _expect(raw.get("seed", seed), int, "sampler.seed")
    workers = _expect(raw.get("workers", 1), int, "sampler.workers")
    if workers < 1:
        _fail("sampler.workers must be positive")
    glis = _block(GlisConfig, raw.get("glis", {}), "sampler.glis", seed=sampler_seed)
    if kind == "glis":
        if budget < glis.n_initial:
            _fail(f"sampler.budget ({budget}) must be >= glis.n_initial ({glis.n_initial})")
        if workers != 1:
            _fail("the glis sampler is sequential; workers must be 1")
    return SamplerConfig(kind, budget, sampler_seed, glis, workers)


def from_dict(raw: dict) -> CampaignConfig:
    raw = _expect(raw, dict, "config")
    unknown = set(raw) - TOP_LEVEL_KEYS
    if unknown:
        _fail(f"unknown top-level key(s) {sorted(unknown)}")
    if "space" not in raw:
        _fail("config needs a 'space' block")
    seed = _expect(raw.get("seed", 0), int, "seed")
    nuisance = _expect(raw.get("nuisance", {}), dict, "nuisance")
    if set(nuisance) - {"enabled"}:
        _fail(f"nuisance: unknown field(s) {sorted(set(nuisance) - {'enabled'})}")
    objective = raw.get("objective", "rss_guarantee")
    if objective not in SHIPPED_OBJECTIVES:
        _fail(f"objective must be one of {list(SHIPPED_OBJECTIVES)}, got {objective!r}")
    contract = raw.get("contract")
    return CampaignConfig(
        space=_space(raw["space"]),
        sampler=_sampler(raw.get("sampler", {}), seed),
        sim=_block(SimConstants, raw.get("sim", {}), "sim"),
        rss=_block(RssParams, raw.get("rss", {}), "rss"),
        nuisance_enabled=_expect(nuisance.get("enabled", True), bool, "nuisance.enabled"),
        objective=objective,
        contract=None if contract is None else _block(ContractConfig, contract, "contract"),
        seed=seed,
        save_traces=_expect(raw.get("save_traces", False), bool, "save_traces"),
    )


def load_config(path) -> CampaignConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return from_dict(raw)
