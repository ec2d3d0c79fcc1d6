"""Falsification campaigns: sample, simulate, monitor, feed back, record.

Results are JSON lines, one record per simulation followed by a summary line
tagged ``"type": "summary"``.  Every line is flushed as soon as it is known,
so an interrupted campaign still leaves parseable records behind.
"""

from __future__ import annotations

import csv
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .. import contracts
from ..aeb import NuisanceParams, ScenarioParams, rss_clauses, rss_spec, simulate
from ..sampling import GlisState, clamp_feedback, halton, next_point, uniform_random, update
from ..stl import IaSpec, Trace, Verdict, classify, input_vacuity, output_robustness, parse, robustness
from .config import CampaignConfig

SCATTER_HEADER = ("run", "safe_dist", "ego_speed", "robustness", "falsified")


def encode_real(value: float):
    """JSON form of an extended real: infinities become the strings "inf"/"-inf"."""
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return float(value)


def decode_real(value) -> float:
    if isinstance(value, str):
        if value not in ("inf", "-inf"):
            raise ValueError(f"not an extended real: {value!r}")
        return float(value)
    return float(value)


def nuisance_seed(global_seed: int, run_index: int) -> int:
    return int(np.random.SeedSequence([global_seed, run_index]).generate_state(1, np.uint64)[0])


@dataclass
class RunRecord:
    run: int
    x: dict
    nuisance_seed: int
    nuisance: dict
    robustness: float
    clauses: dict
    mu: float
    nu: float
    verdict: str
    contract: Optional[dict] = None
    trace: Optional[str] = None

    @property
    def falsified(self) -> bool:
        return self.robustness < 0

    def to_json(self) -> dict:
        out = {
            "type": "run",
            "run": self.run,
            "x": self.x,
            "nuisance_seed": self.nuisance_seed,
            "nuisance": self.nuisance,
            "robustness": encode_real(self.robustness),
            "clauses": {k: encode_real(v) for k, v in self.clauses.items()},
            "mu": encode_real(self.mu),
            "nu": encode_real(self.nu),
            "verdict": self.verdict,
        }
        if self.contract is not None:
            out["contract"] = {k: encode_real(v) if isinstance(v, float) else v for k, v in self.contract.items()}
        if self.trace is not None:
            out["trace"] = self.trace
        return out


@dataclass
class CampaignReport:
    config: dict
    records: list = field(default_factory=list)
    wall_clock_s: float = 0.0
    complete: bool = True

    @property
    def falsifying_count(self) -> int:
        return sum(r.falsified for r in self.records)

    def best(self) -> Optional[RunRecord]:
        return min(self.records, key=lambda r: r.robustness, default=None)

    def summary(self) -> dict:
        # wall-clock time stays out of the file so reruns are byte-identical
        best = self.best()
        return {
            "type": "summary",
            "config": self.config,
            "runs": len(self.records),
            "falsifying": self.falsifying_count,
            "best": None if best is None else {"run": best.run, "x": best.x, "robustness": encode_real(best.robustness)},
            "complete": self.complete,
        }


def _objective(name: str, clauses: dict) -> float:
    if name == "rss_guarantee":
        return clauses["guarantee"]
    return min(clauses.values())


def evaluate_run(cfg: CampaignConfig, run: int, x: np.ndarray, trace_dir: Optional[Path] = None):
    """Simulate and monitor one concrete scenario."""
    seed = nuisance_seed(cfg.seed, run)
    nuis = NuisanceParams.draw(seed, cfg.nuisance_enabled)
    params = ScenarioParams(**cfg.space.as_dict(x))
    w = simulate(params, cfg.sim, nuis, cfg.rss)

    clauses = {name: robustness(phi, w, 0) for name, phi in rss_clauses(cfg.rss).items()}
    spec = rss_spec(cfg.rss)
    mu, nu = output_robustness(spec, w, 0), input_vacuity(spec, w, 0)
    report = None
    if cfg.contract is not None:
        report = contracts.evaluate(cfg.contract.contract(), w).to_dict()
    trace_ref = None
    if trace_dir is not None:
        trace_ref = f"{trace_dir.name}/run_{run:05d}.csv"
        w.to_csv(trace_dir / f"run_{run:05d}.csv")
    record = RunRecord(
        run=run,
        x=cfg.space.as_dict(x),
        nuisance_seed=seed,
        nuisance={"lead_brake_decel": nuis.lead_brake_decel, "spawn_jitter": nuis.spawn_jitter},
        robustness=_objective(cfg.objective, clauses),
        clauses=clauses,
        mu=mu,
        nu=nu,
        verdict=classify(mu, nu).value,
        contract=report,
        trace=trace_ref,
    )
    return record


def _passive_points(cfg: CampaignConfig) -> list:
    if cfg.sampler.kind == "halton":
        return [halton(i + 1, cfg.space) for i in range(cfg.sampler.budget)]
    rng = np.random.default_rng(cfg.sampler.seed)
    return [uniform_random(rng, cfg.space) for _ in range(cfg.sampler.budget)]


def _write(fh, obj: dict):
    fh.write(json.dumps(obj, allow_nan=False) + "\n")
    fh.flush()


def run(cfg: CampaignConfig, out_path, glis_state: Optional[GlisState] = None) -> CampaignReport:
    """Execute exactly ``budget`` simulations and write the results file.

    Pass ``glis_state`` to inspect the sampler afterwards; it must be fresh.
    """
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    trace_dir = None
    if cfg.save_traces:
        trace_dir = out_path.with_name(out_path.stem + "_traces")
        trace_dir.mkdir(exist_ok=True)

    report = CampaignReport(cfg.to_dict())
    start = time.perf_counter()
    with open(out_path, "w") as fh:
        try:
            if cfg.sampler.kind == "glis":
                state = glis_state or GlisState(cfg.sampler.glis, cfg.space)
                for i in range(cfg.sampler.budget):
                    x = next_point(state)
                    record = evaluate_run(cfg, i, x, trace_dir)
                    update(state, x, clamp_feedback(record.robustness))
                    report.records.append(record)
                    _write(fh, record.to_json())
            else:
                points = _passive_points(cfg)
                args = [(cfg, i, x, trace_dir) for i, x in enumerate(points)]
                if cfg.sampler.workers > 1:
                    with ProcessPoolExecutor(cfg.sampler.workers) as pool:
                        results = pool.map(_evaluate_args, args)
                        for record in results:
                            report.records.append(record)
                            _write(fh, record.to_json())
                else:
                    for a in args:
                        record = evaluate_run(*a)
                        report.records.append(record)
                        _write(fh, record.to_json())
        except BaseException:
            report.complete = False
            _write(fh, report.summary())
            raise
        report.wall_clock_s = time.perf_counter() - start
        _write(fh, report.summary())
    return report


def _evaluate_args(args):
    return evaluate_run(*args)


def read_results(path) -> tuple[list, Optional[dict]]:
    """Records and summary from a results file.

    A damaged final line (an interrupted write) is ignored; damage anywhere
    else raises ``ValueError``.
    """
    lines = Path(path).read_text().splitlines()
    records, summary = [], None
    for k, line in enumerate(lines):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError:
            if k == len(lines) - 1:
                break
            raise ValueError(f"{path}: line {k + 1} is not valid JSON") from None
        if obj.get("type") == "summary":
            summary = obj
        elif obj.get("type") == "run":
            records.append(obj)
        else:
            raise ValueError(f"{path}: line {k + 1} has unknown type {obj.get('type')!r}")
    return records, summary


def export_scatter(report_path, out_path) -> int:
    """Write one CSV row per run record; returns the number of rows."""
    records, _ = read_results(report_path)
    with open(out_path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SCATTER_HEADER)
        for r in records:
            rho = decode_real(r["robustness"])
            writer.writerow([r["run"], repr(float(r["x"]["safe_dist"])), repr(float(r["x"]["ego_speed"])),
                             encode_real(rho) if math.isinf(rho) else repr(rho), int(rho < 0)])
    return len(records)


@dataclass(frozen=True)
class MonitorResult:
    robustness: float
    mu: float
    nu: float
    verdict: Verdict


def monitor_trace(w: Trace, spec_text: str, inputs=(), outputs=(), t_index: int = 0) -> MonitorResult:
    phi = parse(spec_text)
    spec = IaSpec(frozenset(inputs), frozenset(outputs), phi)
    rho = robustness(phi, w, t_index)
    mu, nu = output_robustness(spec, w, t_index), input_vacuity(spec, w, t_index)
    return MonitorResult(rho, mu, nu, classify(mu, nu))


def monitor_cmd(trace_path, spec_text: str, inputs=(), outputs=(), t_index: int = 0) -> MonitorResult:
    return monitor_trace(Trace.from_csv(trace_path), spec_text, inputs, outputs, t_index)
