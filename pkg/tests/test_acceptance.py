"""End-to-end acceptance checks, one test per criterion.

Each test records its outcome in ``conftest.ACCEPTANCE`` before asserting, so
the terminal summary lists a PASS/FAIL line for every criterion.
"""

import dataclasses
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from conftest import ACCEPTANCE
from csi.aeb import RssParams, rss_safe_distance
from csi.campaign import evaluate_run, from_dict, load_config, run
from csi.contracts import Contract, evaluate
from csi.sampling import (
    GlisConfig,
    GlisState,
    ParameterSpace,
    acquisition,
    halton,
    minimize,
    radical_inverse,
    surrogate,
    update,
)
from csi.stl import (
    IaSpec,
    Trace,
    Verdict,
    classify,
    input_vacuity,
    output_robustness,
    parse,
    relative_robustness,
    robustness_signal,
)
from gen import VARS, random_formula, random_trace, rows_of
from reference import Oracle, rss_distance_expression

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def record(number: int, passed: bool, detail: str):
    ACCEPTANCE.append((number, bool(passed), detail))
    assert passed, f"criterion {number}: {detail}"


def test_criterion_01_monitor_matches_reference():
    rng = np.random.default_rng(2024)
    cases = []
    for k in range(500):
        dt = float(rng.choice([1.0, 0.5, 0.1]))
        n_vars = int(rng.integers(1, 4))
        names = VARS[:n_vars]
        phi = random_formula(rng, int(rng.integers(1, 5)), names=names, dt=dt)
        w = random_trace(rng, int(rng.integers(1, 65)), names=names, dt=dt, integer=bool(k % 2))
        relative = k % 3 == 0
        measured = set(rng.choice(names, size=int(rng.integers(0, n_vars + 1)), replace=False))
        fixed = set(names) - measured if rng.random() < 0.5 else set()
        cases.append((phi, w, relative, measured, fixed))

    start = time.perf_counter()
    engine = []
    for phi, w, relative, measured, fixed in cases:
        if relative:
            engine.append([relative_robustness(phi, w, t, measured, fixed) for t in range(len(w))])
        else:
            engine.append(list(robustness_signal(phi, w)))
    elapsed = time.perf_counter() - start

    worst, mismatches = 0.0, 0
    for (phi, w, relative, measured, fixed), got in zip(cases, engine):
        oracle = Oracle(rows_of(w), w.dt, measured, fixed) if relative else Oracle(rows_of(w), w.dt)
        for t, value in enumerate(got):
            ref = oracle(phi, t)
            if value == ref:
                continue
            err = abs(value - ref)
            worst = max(worst, err)
            mismatches += not err <= 1e-9
    record(1, mismatches == 0 and elapsed < 10.0,
           f"500 formulas, {mismatches} mismatches, max |diff| {worst:.1e}, engine {elapsed:.2f} s")


def _table_case(formula, u, y):
    spec = IaSpec({"u"}, {"y"}, parse(formula))
    w = Trace.from_columns({"u": np.full(5, float(u)), "y": np.full(5, float(y))}, dt=1.0)
    mu, nu = output_robustness(spec, w), input_vacuity(spec, w)
    return mu, nu, classify(mu, nu)


def test_criterion_02_ia_table_rows():
    inf = float("inf")
    cases = [
        ("always ((u > 0) or (y > 0))", 2, -1, (inf, 2.0, Verdict.VACUOUSLY_TRUE)),
        ("always ((u > 0) -> (y > 0))", 1, 2, (2.0, 0.0, Verdict.NONVACUOUSLY_TRUE)),
        ("always ((u > 0) -> (y > 0))", 1, -2, (-2.0, 0.0, Verdict.NONVACUOUSLY_FALSE)),
        ("always ((u > 0) and (y > 0))", -1, 3, (-inf, -1.0, Verdict.VACUOUSLY_FALSE)),
        ("always ((u > 0) -> (y > 0))", 1, 0, (0.0, 0.0, Verdict.BORDERLINE)),
    ]
    got = [_table_case(f, u, y) for f, u, y, _ in cases]
    ok = all(g == expected for g, (*_, expected) in zip(got, cases))
    record(2, ok, "rows: " + ", ".join(v.value for *_, v in got))


def test_criterion_03_contract_divergence():
    phi, psi = parse("p > 0"), parse("q > 0")
    c = Contract(phi, psi, 3.0)

    p = np.where(np.arange(11) <= 7, 1.0, -1.0)
    q = np.ones(11)
    q[5] = -1.0
    first = evaluate(c, Trace.from_columns({"p": p, "q": q}, dt=1.0))

    p2 = np.ones(11)
    p2[5] = -1.0
    q2 = np.ones(11)
    q2[6:9] = -1.0
    second = evaluate(c, Trace.from_columns({"p": p2, "q": q2}, dt=1.0))

    ok = (first.classical_verdict and not first.refined_verdict
          and second.classical_verdict and second.refined_verdict)
    record(3, ok, f"guarantee first: classical={first.classical_verdict} refined={first.refined_verdict}; "
                  f"assumption first: classical={second.classical_verdict} refined={second.refined_verdict}")


def test_criterion_04_rss_distance():
    value = rss_safe_distance(10.0, 10.0, RssParams(0.5, 2.0, 4.0, 8.0))
    expr = rss_distance_expression()
    rng = np.random.default_rng(99)
    worst = 0.0
    for _ in range(100):
        vf, vb = rng.uniform(0, 40, size=2)
        rss = RssParams(float(rng.uniform(0, 2)), float(rng.uniform(0, 4)), 4.0, 8.0)
        ref = max(0.0, expr(vf, vb, rss.tau, rss.a_max_acc, rss.a_min_br, rss.a_max_br))
        worst = max(worst, abs(rss_safe_distance(vf, vb, rss) - ref))
    record(4, abs(value - 14.125) <= 1e-9 and worst <= 1e-9,
           f"d_safe(10, 10) = {value}, symbolic max |diff| {worst:.1e}")


def test_criterion_05_halton_exactness():
    expected = [Fraction(1, 2), Fraction(1, 4), Fraction(3, 4), Fraction(1, 8),
                Fraction(5, 8), Fraction(3, 8), Fraction(7, 8), Fraction(1, 16)]
    exact = [radical_inverse(i, 2) for i in range(1, 9)]
    unit1 = ParameterSpace.from_bounds([("x", 0.0, 1.0)])
    floats = [float(halton(i, unit1)[0]) for i in range(1, 9)]
    unit2 = ParameterSpace.from_bounds([("x", 0.0, 1.0), ("y", 0.0, 1.0)])
    first2 = halton(1, unit2).tolist()
    ok = exact == expected and floats == [float(f) for f in expected] and first2 == [0.5, 1 / 3]
    record(5, ok, f"base-2 prefix {[str(f) for f in exact]}, 2-D index 1 = {first2}")


def test_criterion_06_surrogate_interpolation():
    # well-conditioned means the kernel system is solved essentially in full
    cfg = GlisConfig(eps_svd=1e-6)
    unit2 = ParameterSpace.from_bounds([("x", 0.0, 1.0), ("y", 0.0, 1.0)])
    rng = np.random.default_rng(6)
    worst_ratio, worst_acq = 0.0, 0.0
    for _ in range(50):
        n = int(rng.integers(2, 21))
        pts = []
        while len(pts) < n:
            cand = rng.random(2)
            if all(np.linalg.norm(cand - q) >= 0.05 for q in pts):
                pts.append(cand)
        f = rng.normal(scale=float(rng.choice([0.5, 5.0, 50.0])), size=n)
        state = GlisState(dataclasses.replace(cfg, n_initial=n), unit2)
        for x, v in zip(pts, f):
            update(state, x, v)
        scale = max(1.0, float(f.max() - f.min()))
        for x, v in zip(pts, f):
            worst_ratio = max(worst_ratio, abs(surrogate(state, x) - v) / scale)
            worst_acq = max(worst_acq, abs(acquisition(state, x) - surrogate(state, x)))
    record(6, worst_ratio <= 1e-6 and worst_acq == 0.0,
           f"50 sets, max residual / max(1, dF) = {worst_ratio:.1e}, max |a - fhat| at nodes = {worst_acq:.1e}")


def test_criterion_07_glis_convergence():
    unit1 = ParameterSpace.from_bounds([("x", 0.0, 1.0)])
    start = time.perf_counter()
    bests = []
    for seed in range(10):
        state = minimize(lambda x: float((x[0] - 0.3) ** 2), unit1, 25, GlisConfig(n_initial=5, seed=seed))
        bests.append(state.best().f)
    elapsed = time.perf_counter() - start
    hits = sum(b <= 1e-2 for b in bests)
    record(7, hits == 10 and elapsed < 5.0, f"{hits}/10 seeds reach f <= 1e-2 (worst {max(bests):.1e}), {elapsed:.2f} s")


def test_criterion_08_glis_beats_halton(tmp_path):
    base = load_config(CONFIGS / "glis_aeb.json").to_dict()
    start = time.perf_counter()
    pairs = []
    for seed in range(5):
        counts = []
        for kind in ("glis", "halton"):
            raw = {**base, "seed": seed, "sampler": {**base["sampler"], "kind": kind, "seed": seed}}
            counts.append(run(from_dict(raw), tmp_path / f"{kind}_{seed}.jsonl").falsifying_count)
        pairs.append(tuple(counts))
    elapsed = time.perf_counter() - start
    wins = sum(g >= h for g, h in pairs)
    ok = wins >= 4 and all(g >= 1 for g, _ in pairs) and elapsed < 120.0
    record(8, ok, f"(glis, halton) falsifying per seed {pairs}, glis >= halton in {wins}/5, {elapsed:.1f} s")


def test_criterion_09_determinism(tmp_path):
    configs = sorted(CONFIGS.glob("*.json"))
    same = []
    for path in configs:
        cfg = load_config(path)
        run(cfg, tmp_path / "a.jsonl")
        run(cfg, tmp_path / "b.jsonl")
        same.append((tmp_path / "a.jsonl").read_bytes() == (tmp_path / "b.jsonl").read_bytes())
    record(9, bool(configs) and all(same), f"{sum(same)}/{len(configs)} shipped configs byte-identical on rerun")


def test_criterion_10_nuisance_spread():
    base = load_config(CONFIGS / "glis_aeb.json").to_dict()
    x = np.array([27.0, 10.5])
    rhos = [evaluate_run(from_dict({**base, "seed": s}), 0, x).robustness for s in range(10)]
    spread = max(rhos) - min(rhos)
    record(10, spread > 0, f"robustness at (27, 10.5) over 10 seeds in [{min(rhos):.3f}, {max(rhos):.3f}], spread {spread:.3f}")
