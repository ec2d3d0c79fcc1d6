import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from csi.aeb import (
    CHANNELS,
    InvalidParams,
    NegativeVelocity,
    NuisanceParams,
    RssParams,
    ScenarioParams,
    SimConstants,
    assumption_spec,
    rss_clauses,
    rss_guarantee,
    rss_safe_distance,
    rss_spec,
    simulate,
)
from csi.stl import (
    InconsistentPair,
    Verdict,
    classify,
    input_vacuity,
    output_robustness,
    robustness,
    robustness_signal,
)
from reference import rss_distance_expression


def guarantee_rho(w, rss=RssParams()):
    return robustness(rss_guarantee(rss), w)


# ---------------------------------------------------------------- safe distance


def test_safe_distance_by_hand():
    assert abs(rss_safe_distance(10.0, 10.0) - 14.125) <= 1e-9
    assert rss_safe_distance(0.0, 0.0, RssParams(tau=0.0)) == 0.0
    assert rss_safe_distance(1e3, 0.0, RssParams(tau=0.0)) == 0.0


def test_safe_distance_is_vectorised():
    out = rss_safe_distance(np.array([10.0, 0.0]), np.array([10.0, 0.0]))
    assert out.shape == (2,) and abs(out[0] - 14.125) <= 1e-9


def test_safe_distance_matches_symbolic_derivation():
    expr = rss_distance_expression()
    rng = np.random.default_rng(4)
    for _ in range(100):
        vf, vb = rng.uniform(0, 40, size=2)
        tau, acc = rng.uniform(0, 2), rng.uniform(0, 4)
        a_min = rng.uniform(1, 6)
        a_max = a_min + rng.uniform(0, 6)
        rss = RssParams(tau=tau, a_max_acc=acc, a_min_br=a_min, a_max_br=a_max)
        assert abs(rss_safe_distance(vf, vb, rss) - max(0.0, expr(vf, vb, tau, acc, a_min, a_max))) <= 1e-9


def test_safe_distance_errors():
    with pytest.raises(NegativeVelocity):
        rss_safe_distance(-1.0, 3.0)
    with pytest.raises(InvalidParams):
        RssParams(a_min_br=5.0, a_max_br=4.0)
    with pytest.raises(InvalidParams):
        RssParams(tau=-0.1)


# ---------------------------------------------------------------- simulator


def test_trace_layout():
    w = simulate(ScenarioParams(35.0, 10.0))
    assert w.var_names == CHANNELS
    assert len(w) == 201 and w.dt == 0.1


def test_far_trigger_keeps_a_margin():
    w = simulate(ScenarioParams(45.0, 9.0))
    margin = w.column("dist") - w.column("d_safe")
    assert margin.min() > 0
    assert guarantee_rho(w) > 0


def test_late_trigger_is_more_critical():
    safe = guarantee_rho(simulate(ScenarioParams(45.0, 9.0)))
    tight = guarantee_rho(simulate(ScenarioParams(25.0, 11.0)))
    assert tight < safe and tight < 0


def test_simulation_is_deterministic():
    p = ScenarioParams(31.0, 10.2)
    n = NuisanceParams.draw(17)
    a, b = simulate(p, n=n), simulate(p, n=n)
    assert a.samples.tobytes() == b.samples.tobytes()


@settings(max_examples=60, deadline=None)
@given(st.floats(0, 60), st.floats(0, 15), st.integers(0, 2**32 - 1), st.booleans())
def test_physical_sanity(safe_dist, ego_speed, seed, nuisance):
    c = SimConstants()
    n = NuisanceParams.draw(seed, enabled=nuisance)
    w = simulate(ScenarioParams(safe_dist, ego_speed), c, n)
    for v in ("v_ego", "v_lead"):
        assert w.column(v).min() >= 0
    for x in ("x_ego", "x_lead"):
        assert np.all(np.diff(w.column(x)) >= 0)
    a_ego, a_lead = w.column("a_ego"), w.column("a_lead")
    assert a_ego.min() >= -c.ego_max_brake and a_ego.max() <= RssParams().a_max_acc
    assert a_lead.min() >= -n.lead_brake_decel and a_lead.max() <= 0
    assert np.all(w.column("beta_lead") >= 0)


def test_criticality_is_monotone_in_trigger_distance():
    for speed in np.linspace(9, 11, 5):
        rhos = [guarantee_rho(simulate(ScenarioParams(d, speed))) for d in np.linspace(25, 45, 5)]
        assert all(a <= b for a, b in zip(rhos, rhos[1:])), (speed, rhos)


def test_nuisance_is_reproducible_and_matters():
    assert NuisanceParams.draw(5) == NuisanceParams.draw(5)
    off = NuisanceParams.draw(5, enabled=False)
    assert (off.lead_brake_decel, off.spawn_jitter) == (2.0, 0.0)
    p = ScenarioParams(27.0, 10.5)
    rhos = [guarantee_rho(simulate(p, n=NuisanceParams.draw(s))) for s in range(10)]
    assert max(rhos) - min(rhos) > 0
    again = [guarantee_rho(simulate(p, n=NuisanceParams.draw(s))) for s in range(10)]
    assert rhos == again


def test_collision_implies_violation():
    w = simulate(ScenarioParams(0.0, 15.0))
    assert w.column("dist").min() <= 0
    assert guarantee_rho(w) < 0
    assert output_robustness(rss_spec(RssParams()), w) < 0


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 60), st.floats(0, 20), st.integers(0, 2**32 - 1))
def test_any_collision_is_a_violation(safe_dist, ego_speed, seed):
    w = simulate(ScenarioParams(safe_dist, ego_speed), n=NuisanceParams.draw(seed))
    if w.column("dist").min() <= 0:
        assert guarantee_rho(w) < 0


def test_invalid_parameters():
    with pytest.raises(InvalidParams):
        ScenarioParams(-1.0, 10.0)
    with pytest.raises(InvalidParams):
        ScenarioParams(30.0, math.nan)
    with pytest.raises(InvalidParams):
        SimConstants(dt=0.3, horizon=20.0)
    with pytest.raises(InvalidParams):
        SimConstants(actuator_lag=0.25)
    with pytest.raises(InvalidParams):
        NuisanceParams(lead_brake_decel=0.0)


# ---------------------------------------------------------------- specifications


def test_assumption_margin_during_braking():
    phi = assumption_spec(2.0)
    p = ScenarioParams(35.0, 10.0)
    gentle = simulate(p, n=NuisanceParams(enabled=True, lead_brake_decel=1.5))
    rho = robustness_signal(phi, gentle)
    braking = gentle.column("a_lead") < 0
    # the final braking step is shortened by the standstill clamp
    full = gentle.column("a_lead") == -1.5
    assert full.sum() >= braking.sum() - 1 and np.all(rho[full] == 0.5)
    assert np.all(rho[braking] >= 0.5)

    hard = simulate(p, n=NuisanceParams(enabled=True, lead_brake_decel=3.0))
    assert robustness_signal(phi, hard).min() < 0

    never = simulate(p, SimConstants(brake_delay=100.0))
    assert np.all(robustness_signal(phi, never) == 2.0)


def test_clause_texts():
    clauses = rss_clauses(RssParams())
    assert set(clauses) == {"velocity", "acceleration", "guarantee"}
    assert clauses["guarantee"] == rss_guarantee(RssParams())


def test_ia_verdicts_on_simulated_traces():
    spec = rss_spec(RssParams())
    # the ego ends at standstill, so the velocity clause pins mu at exactly 0
    w = simulate(ScenarioParams(45.0, 9.0))
    mu, nu = output_robustness(spec, w), input_vacuity(spec, w)
    assert (mu, nu) == (0.0, 0.0) and classify(mu, nu) is Verdict.BORDERLINE

    cruising = simulate(ScenarioParams(25.0, 9.0), SimConstants(brake_delay=100.0))
    mu, nu = output_robustness(spec, cruising), input_vacuity(spec, cruising)
    assert mu > 0 and math.isfinite(mu) and nu == 0
    assert classify(mu, nu) is Verdict.NONVACUOUSLY_TRUE


def test_mu_nu_pairs_are_always_classifiable():
    spec = rss_spec(RssParams())
    rng = np.random.default_rng(11)
    for k in range(150):
        p = ScenarioParams(float(rng.uniform(0, 60)), float(rng.uniform(0, 20)))
        c = SimConstants(brake_delay=float(rng.choice([0.0, 4.0, 100.0])))
        w = simulate(p, c, NuisanceParams.draw(k, enabled=bool(k % 2)))
        mu, nu = output_robustness(spec, w), input_vacuity(spec, w)
        try:
            classify(mu, nu)
        except InconsistentPair:
            pytest.fail(f"unclassifiable pair ({mu}, {nu}) for {p}, {c}")
