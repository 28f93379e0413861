"""Acceptance suite: one test per contract criterion, each printing a
PASS/FAIL line (run with ``pytest tests/test_acceptance.py -s`` to see them).

The filtered-run minimum-separation clause is expected to fail for the
bundled scenario and is marked as a strict xfail: missiles 1 and 2 start
200 m apart, while every safety distance accepted by the feasibility rule
exceeds 238.7 m, so the run minimum can never reach the safety distance.
The analysis lives in the repository notes; if the clause ever passes the
strict marker will flag it for re-examination.
"""

from __future__ import annotations

import math
import time

import numpy as np
import pytest

import rcbf_swarm as rs
from rcbf_swarm.barrier import barrier_eval, rcbf_a_max
from rcbf_swarm.core import (
    AgentSpec,
    AgentState,
    GuidanceParams,
    PhysicalBounds,
    SafetyParams,
    ScenarioConfig,
    SimParams,
    SlackParams,
    WeightParams,
    apply_overrides,
    validate_scenario,
)
from rcbf_swarm.geometry import pair_geometry
from rcbf_swarm.qp import QpProblem, QpRow, solve, verify_kkt
from rcbf_swarm.safety_filter import scenario_a_max

from .oracles import enumerate_qp
from .test_core import two_effector_cfg

EFFECTOR_BOUNDS = PhysicalBounds(v_max=306.0, u_max=392.4)
PAPER_COLLISION_TIME = 6.43


def report(name: str, ok: bool, detail: str = "") -> None:
    tag = "PASS" if ok else "FAIL"
    suffix = f" — {detail}" if detail else ""
    print(f"[{tag}] {name}{suffix}")


def test_feasibility_bound():
    started = time.perf_counter()
    threshold = 306.0**2 / 392.4  # 238.6238532110092
    rejected = all(
        validate_scenario(two_effector_cfg(r_s)) != [] for r_s in (50.0, 150.0, 238.0, threshold)
    )
    accepted = validate_scenario(two_effector_cfg(300.0)) == []
    a_max = rcbf_a_max(300.0, EFFECTOR_BOUNDS, 1.0)
    value_ok = abs(a_max - 96336.0) <= 1e-9 * 96336.0
    ok = rejected and accepted and value_ok
    report(
        "feasibility bound",
        ok,
        f"threshold={threshold:.4f} m, rcbf_a_max(300)={a_max:.6f} ({time.perf_counter() - started:.2f}s)",
    )
    assert rejected, "r_s values at or below v_max^2/u_max must be rejected"
    assert accepted, "r_s = 300 m must be accepted"
    assert value_ok


def test_baseline_collision(table_one):
    started = time.perf_counter()
    times = {}
    for nav in (3, 4, 5):
        cfg = apply_overrides(
            table_one, ["sim.filter_enabled=false", f"guidance.nav_constant={nav}.0"]
        )
        log = rs.run(cfg, log_trajectory=False)
        collisions = [ev for ev in log.events if ev.kind == "collision" and set(ev.agents) == {1, 2}]
        assert collisions, f"N={nav}: no collision between missiles 1 and 2"
        times[nav] = collisions[0].time
    ok = all(4.0 <= t <= 10.0 for t in times.values())
    achieved = ", ".join(f"N={n}: {t:.2f}s" for n, t in times.items())
    report(
        "baseline collision",
        ok,
        f"{achieved} (paper reports {PAPER_COLLISION_TIME}s; {time.perf_counter() - started:.2f}s)",
    )
    assert ok


def test_filtered_safety_events(filtered_log):
    out = filtered_log.outcome
    ok = out.collisions == 0 and out.interceptions == 3
    report(
        "filtered safety (events)",
        ok,
        f"collisions={out.collisions} interceptions={out.interceptions} "
        f"min_sep={out.min_effector_separation:.3f} m",
    )
    assert out.collisions == 0
    assert out.interceptions == 3


@pytest.mark.xfail(
    strict=True,
    reason="Table I starts missiles 1-2 at 200 m separation; every feasibility-"
    "admissible safety distance exceeds 238.7 m, so the run minimum cannot reach r_s",
)
def test_filtered_safety_min_separation(filtered_log, table_one):
    r_s = table_one.safety.r_s
    floor = r_s - 1e-6 * r_s
    out = filtered_log.outcome
    ok = out.min_effector_separation >= floor
    report(
        "filtered safety (min separation)",
        ok,
        f"min_sep={out.min_effector_separation:.3f} m vs r_s={r_s} m "
        "(documented contradiction: initial separation 200 m)",
    )
    assert ok


def test_non_interference(baseline_log, filtered_log):
    started = time.perf_counter()
    m3_activations = [
        ev for ev in filtered_log.events if ev.kind == "filter_activation" and 3 in ev.agents
    ]
    cutoffs = [
        ev.time
        for log in (baseline_log, filtered_log)
        for ev in log.events
        if ev.kind == "interception" and 3 not in ev.agents
    ]
    t_star = min(cutoffs) if cutoffs else math.inf

    steps = 0
    identical = True
    for (t_b, rec_b), (t_f, rec_f) in zip(baseline_log.steps, filtered_log.steps):
        assert t_b == t_f
        if t_b >= t_star:
            break
        b, f = rec_b[3], rec_f[3]
        if (
            b.position != f.position
            or b.velocity != f.velocity
            or b.nominal != f.nominal
            or b.applied != f.applied
        ):
            identical = False
            break
        steps += 1
    ok = not m3_activations and identical
    report(
        "non-interference",
        ok,
        f"missile 3 activations={len(m3_activations)}, bitwise-identical steps={steps} "
        f"(cutoff t*={t_star:.2f}s; {time.perf_counter() - started:.2f}s)",
    )
    assert not m3_activations
    assert identical


def test_qp_oracle_equivalence():
    started = time.perf_counter()
    rng = np.random.default_rng(20250810)
    worst_obj = 0.0
    worst_kkt = 0.0
    for _ in range(1000):
        q = rng.normal(size=(3, 3))
        orth, _ = np.linalg.qr(q)
        W = orth @ np.diag(rng.uniform(0.5, 3.0, 3)) @ orth.T
        W = 0.5 * (W + W.T)
        nominal = tuple(rng.uniform(-10.0, 10.0, 3))
        rows = []
        raw = []
        for _k in range(int(rng.integers(1, 4))):
            c = rng.normal(size=3)
            while np.linalg.norm(c) < 0.3:
                c = rng.normal(size=3)
            b = float(rng.normal(scale=5.0))
            w = float(10.0 ** rng.uniform(-1.0, 1.5))
            rows.append(QpRow(tuple(c), b, slack_weight=w, relaxable=True))
            raw.append((tuple(c), b, w, True))
        problem = QpProblem(nominal=nominal, weight_matrix=W, rows=tuple(rows), slack_reg=1e-6)
        sol = solve(problem)
        oracle = enumerate_qp(nominal, W, raw, problem.slack_reg)
        assert oracle is not None
        worst_obj = max(worst_obj, abs(sol.objective - oracle[2]))
        worst_kkt = max(worst_kkt, verify_kkt(problem, sol))
    ok = worst_obj <= 1e-5 and worst_kkt <= 1e-6
    report(
        "qp oracle equivalence",
        ok,
        f"1000 problems, max |obj error|={worst_obj:.2e}, max KKT residual={worst_kkt:.2e} "
        f"({time.perf_counter() - started:.1f}s)",
    )
    assert worst_obj <= 1e-5
    assert worst_kkt <= 1e-6


def test_slack_prioritization():
    started = time.perf_counter()

    def solve_pair(w1: float):
        rows = (
            QpRow((1.0, 0.0, 0.0), -1.0, slack_weight=w1),
            QpRow((-1.0, 0.0, 0.0), -1.0, slack_weight=1.0),
        )
        return solve(QpProblem((0.0, 0.0, 0.0), np.eye(3), rows, 1e-6))

    sol = solve_pair(10.0)
    high_ok = sol.slacks[0] < 1e-3
    low_ok = abs(sol.slacks[1] - 2.0) <= 1e-3
    sweep = [solve_pair(w).slacks[0] for w in np.linspace(1.0, 100.0, 50)]
    monotone = all(b <= a + 1e-9 for a, b in zip(sweep, sweep[1:]))
    ok = high_ok and low_ok and monotone
    report(
        "slack prioritization",
        ok,
        f"d1={sol.slacks[0]:.2e}, d2={sol.slacks[1]:.6f}, monotone sweep over w1 in [1,100] "
        f"({time.perf_counter() - started:.2f}s)",
    )
    assert high_ok and low_ok and monotone


def _random_encounter(rng: np.random.Generator) -> ScenarioConfig:
    """Crossing salvo encounter: two effectors flying roughly +x with lateral
    offset, each assigned a distant inbound target placed on the other's side."""
    d = rng.uniform(400.0, 1500.0)
    ang = rng.uniform(0.0, 2.0 * math.pi)
    e2_pos = (rng.uniform(-200.0, 200.0), d * math.cos(ang), 0.3 * d * math.sin(ang))

    def heading(yaw: float, pitch: float, speed: float):
        return (
            speed * math.cos(pitch) * math.cos(yaw),
            speed * math.cos(pitch) * math.sin(yaw),
            speed * math.sin(pitch),
        )

    v1 = heading(rng.uniform(-0.26, 0.26), rng.uniform(-0.09, 0.09), rng.uniform(200.0, 306.0))
    v2 = heading(rng.uniform(-0.26, 0.26), rng.uniform(-0.09, 0.09), rng.uniform(200.0, 306.0))
    span = rng.uniform(15000.0, 25000.0)
    t1_pos = (span, e2_pos[1] + rng.uniform(-500.0, 500.0), 0.5 * e2_pos[2])
    t2_pos = (span, rng.uniform(-500.0, 500.0) - 0.2 * e2_pos[1], 0.0)

    def target_velocity():
        return (-rng.uniform(300.0, 640.0), rng.uniform(-64.0, 64.0), 0.0)

    agents = (
        AgentSpec(1, "effector", AgentState((0.0, 0.0, 0.0), v1), EFFECTOR_BOUNDS, 3),
        AgentSpec(2, "effector", AgentState(e2_pos, v2), EFFECTOR_BOUNDS, 4),
        AgentSpec(3, "target", AgentState(t1_pos, target_velocity()), PhysicalBounds(700.0, 0.0)),
        AgentSpec(4, "target", AgentState(t2_pos, target_velocity()), PhysicalBounds(700.0, 0.0)),
    )
    return ScenarioConfig(
        agents=agents,
        guidance=GuidanceParams(4.0),
        safety=SafetyParams(r_s=300.0),
        weights=WeightParams(),
        sim=SimParams(dt=0.005, t_end=30.0, filter_enabled=True, cooperative_links=True),
        slack=SlackParams(),
        name="encounter",
    )


def test_empirical_forward_invariance():
    started = time.perf_counter()
    rng = np.random.default_rng(20240811)
    r_s = 300.0
    tolerance = 1e-6 * r_s * r_s
    separation_floor = r_s * math.sqrt(1.0 - 1e-6)
    a_max = None
    runs = 0
    worst_h = -math.inf
    grazes = 0
    while runs < 100:
        cfg = _random_encounter(rng)
        if a_max is None:
            a_max = scenario_a_max(cfg)
        pair = pair_geometry(cfg.agents[0].initial, cfg.agents[1].initial)
        ev = barrier_eval(pair, r_s, a_max)
        if ev.h > 0.0 or ev.big_h > 0.0:
            continue  # resample: start must lie in the restricted safe set
        runs += 1
        log = rs.run(cfg, log_trajectory=False)
        sep = log.outcome.min_effector_separation
        worst_h = max(worst_h, r_s * r_s - sep * sep)
        if sep < r_s + 20.0:
            grazes += 1
        assert sep >= separation_floor, f"run {runs}: min separation {sep:.6f} m"
    ok = worst_h <= tolerance
    report(
        "empirical forward invariance",
        ok,
        f"100 runs, worst h={worst_h:.3g} m^2 (tolerance {tolerance:.3g}), "
        f"{grazes} grazing encounters ({time.perf_counter() - started:.1f}s)",
    )
    assert ok


def test_zem_analytics():
    started = time.perf_counter()
    rng = np.random.default_rng(7177)
    n = 10_000
    r = rng.uniform(-5000.0, 5000.0, (n, 3))
    v = rng.uniform(-700.0, 700.0, (n, 3))
    worst = 0.0
    checked = 0
    for k in range(n):
        pg = pair_geometry(
            AgentState(tuple(r[k]), tuple(v[k])), AgentState((0.0, 0.0, 0.0), (0.0, 0.0, 0.0))
        )
        if pg.t_zem <= 0.0:
            continue
        checked += 1
        taus = np.linspace(0.0, 2.0 * pg.t_zem, 32)
        seps = np.linalg.norm(r[k][None, :] + taus[:, None] * v[k][None, :], axis=1)
        undercut = pg.zem - seps.min()
        worst = max(worst, undercut)
    ok = worst <= 1e-9
    report(
        "zem analytics",
        ok,
        f"{checked} converging pairs of {n}, worst undercut={worst:.2e} m "
        f"({time.perf_counter() - started:.1f}s)",
    )
    assert ok
