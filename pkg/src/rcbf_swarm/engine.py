"""Deterministic fixed-step closed-loop engagement simulation.

All controls for a step are computed from the step-start snapshot, then all
agents advance together (synchronous update), so the result is independent
of agent ordering. Integration uses the exact constant-acceleration update
of the double integrator, followed by a radial speed clamp. Interception and
collision checks refine each step with sampled sub-points so fast crossings
are not stepped over.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .core import EFFECTOR, TARGET, AgentState, ScenarioConfig
from .guidance import png_command
from .safety_filter import FilterDiagnostics, filter_step, scenario_a_max
from .vecmath import ZERO, Vec3, add, clamp_norm, dist, norm, scale

SUBSTEP_SAMPLES = 10  # sub-intervals used for within-step closest-approach checks


@dataclass(frozen=True, slots=True)
class SimEvent:
    time: float
    kind: str
    agents: tuple[int, ...]
    detail: str = ""


@dataclass(frozen=True, slots=True)
class AgentRecord:
    position: Vec3
    velocity: Vec3
    nominal: Vec3
    applied: Vec3
    n_active_constraints: int
    slack_total: float
    saturated: bool


@dataclass(frozen=True, slots=True)
class RunOutcome:
    interceptions: int
    collisions: int
    min_effector_separation: float
    first_collision_time: float | None
    filter_activations: int
    slack_total: float


@dataclass(slots=True)
class TrajectoryLog:
    dt: float
    agent_ids: tuple[int, ...]
    roles: dict[int, str]
    steps: list[tuple[float, dict[int, AgentRecord]]] = field(default_factory=list)
    events: list[SimEvent] = field(default_factory=list)
    outcome: RunOutcome | None = None


def integrate_step(state: AgentState, accel: Vec3, dt: float, v_max: float) -> AgentState:
    """Exact double-integrator update over one step, then radial speed clamp."""
    p, v = _advance(state.position, state.velocity, accel, dt, v_max)
    return AgentState(position=p, velocity=v)


def _advance(p: Vec3, v: Vec3, a: Vec3, dt: float, v_max: float) -> tuple[Vec3, Vec3]:
    half = 0.5 * dt * dt
    p_new = (
        p[0] + v[0] * dt + a[0] * half,
        p[1] + v[1] * dt + a[1] * half,
        p[2] + v[2] * dt + a[2] * half,
    )
    v_new = clamp_norm((v[0] + a[0] * dt, v[1] + a[1] * dt, v[2] + a[2] * dt), v_max)
    return p_new, v_new


def _pair_min_range(
    p1: Vec3, v1: Vec3, a1: Vec3, p2: Vec3, v2: Vec3, a2: Vec3, dt: float
) -> tuple[float, float]:
    """(min sampled range, sub-time of the minimum) over the two arcs."""
    best = math.inf
    best_tau = 0.0
    for s in range(SUBSTEP_SAMPLES + 1):
        tau = dt * s / SUBSTEP_SAMPLES
        half = 0.5 * tau * tau
        dx = (p1[0] + v1[0] * tau + a1[0] * half) - (p2[0] + v2[0] * tau + a2[0] * half)
        dy = (p1[1] + v1[1] * tau + a1[1] * half) - (p2[1] + v2[1] * tau + a2[1] * half)
        dz = (p1[2] + v1[2] * tau + a1[2] * half) - (p2[2] + v2[2] * tau + a2[2] * half)
        r = math.sqrt(dx * dx + dy * dy + dz * dz)
        if r < best:
            best = r
            best_tau = tau
    return best, best_tau


def run(cfg: ScenarioConfig, log_trajectory: bool = True) -> TrajectoryLog:
    """Closed-loop run until t_end or every target is intercepted.

    The caller is responsible for validating the config first; the engine
    itself only needs the fields it reads to be structurally sound.
    """
    dt = cfg.sim.dt
    n_steps = max(1, round(cfg.sim.t_end / dt))
    ids = tuple(a.id for a in cfg.agents)
    spec_by_id = {a.id: a for a in cfg.agents}
    roles = {a.id: a.role for a in cfg.agents}
    effector_ids = [a.id for a in cfg.agents if a.role == EFFECTOR]
    target_ids = [a.id for a in cfg.agents if a.role == TARGET]

    pos: dict[int, Vec3] = {a.id: a.initial.position for a in cfg.agents}
    vel: dict[int, Vec3] = {a.id: a.initial.velocity for a in cfg.agents}
    alive: dict[int, bool] = {a.id: True for a in cfg.agents}

    a_max = None
    if cfg.sim.filter_enabled and len(effector_ids) >= 2:
        a_max = scenario_a_max(cfg)

    log = TrajectoryLog(dt=dt, agent_ids=ids, roles=roles)
    min_sep = math.inf
    interceptions = 0
    collisions = 0
    first_collision: float | None = None
    run_slack = 0.0
    activations = 0
    intervening = {i: False for i in effector_ids}
    saturating = {i: False for i in effector_ids}

    # Proximity brackets: a pair needs sub-step screening only when a step
    # could plausibly cross the threshold.
    def bracket(i: int, j: int, threshold: float) -> float:
        closing = spec_by_id[i].bounds.v_max + spec_by_id[j].bounds.v_max
        return threshold + 2.0 * closing * dt

    # Pairs already inside a threshold at t = 0 resolve immediately.
    initial_events: list[SimEvent] = []
    for idx, i in enumerate(effector_ids):
        for j in effector_ids[idx + 1 :]:
            r0 = dist(pos[i], pos[j])
            if r0 < cfg.sim.r_collision:
                initial_events.append(SimEvent(0.0, "collision", (i, j), f"range={r0:.6g}m"))
    for i in effector_ids:
        for j in target_ids:
            r0 = dist(pos[i], pos[j])
            if r0 < cfg.sim.r_hit:
                initial_events.append(SimEvent(0.0, "interception", (i, j), f"range={r0:.6g}m"))
    for ev in initial_events:
        log.events.append(ev)
        if ev.kind == "collision":
            collisions += 1
            first_collision = first_collision if first_collision is not None else ev.time
        else:
            interceptions += 1
        for agent in ev.agents:
            alive[agent] = False

    for k in range(n_steps):
        t = k * dt
        live_ids = [i for i in ids if alive[i]]
        snapshot = {i: AgentState(position=pos[i], velocity=vel[i]) for i in live_ids}

        nominal: dict[int, Vec3] = {}
        applied: dict[int, Vec3] = {}
        diags: dict[int, FilterDiagnostics] = {}
        for i in ids:
            if not alive[i] or roles[i] == TARGET:
                nominal[i] = ZERO
                applied[i] = ZERO
                continue
            spec = spec_by_id[i]
            target = spec.assigned_target
            if target is None or not alive[target]:
                nom = ZERO
            else:
                nom = png_command(snapshot[i], snapshot[target], cfg.guidance.nav_constant).accel
            nominal[i] = nom
            if cfg.sim.filter_enabled:
                acc, diag = filter_step(i, snapshot, nom, cfg, a_max=a_max)
                diags[i] = diag
                run_slack += diag.slack_total
                if diag.intervened and not intervening[i]:
                    activations += 1
                    log.events.append(SimEvent(t, "filter_activation", (i,), f"neighbors={len(diag.active_neighbor_ids)}"))
                elif not diag.intervened and intervening[i]:
                    log.events.append(SimEvent(t, "filter_deactivation", (i,)))
                intervening[i] = diag.intervened
                sat = diag.saturated
            else:
                acc = clamp_norm(nom, spec.bounds.u_max)
                sat = acc is not nom
            if sat and not saturating[i]:
                log.events.append(SimEvent(t, "saturation", (i,), f"|a_nom|={norm(nominal[i]):.6g}"))
            saturating[i] = sat
            applied[i] = acc

        if log_trajectory:
            records = {
                i: AgentRecord(
                    position=pos[i],
                    velocity=vel[i],
                    nominal=nominal[i],
                    applied=applied[i],
                    n_active_constraints=diags[i].qp_active_count if i in diags else 0,
                    slack_total=diags[i].slack_total if i in diags else 0.0,
                    saturated=saturating.get(i, False) if alive[i] else False,
                )
                for i in ids
            }
            log.steps.append((t, records))

        step_events: list[SimEvent] = []
        for idx, i in enumerate(effector_ids):
            if not alive[i]:
                continue
            for j in effector_ids[idx + 1 :]:
                if not alive[j]:
                    continue
                end_range = _end_range(pos, vel, applied, i, j, dt)
                if end_range < bracket(i, j, cfg.sim.r_collision):
                    rng, tau = _pair_min_range(
                        pos[i], vel[i], applied[i], pos[j], vel[j], applied[j], dt
                    )
                else:
                    rng, tau = end_range, dt
                if rng < min_sep:
                    min_sep = rng
                if rng < cfg.sim.r_collision:
                    step_events.append(SimEvent(t + tau, "collision", (i, j), f"range={rng:.6g}m"))
        for i in effector_ids:
            if not alive[i]:
                continue
            for j in target_ids:
                if not alive[j]:
                    continue
                end_range = _end_range(pos, vel, applied, i, j, dt)
                if end_range < bracket(i, j, cfg.sim.r_hit):
                    rng, tau = _pair_min_range(
                        pos[i], vel[i], applied[i], pos[j], vel[j], applied[j], dt
                    )
                    if rng < cfg.sim.r_hit:
                        step_events.append(SimEvent(t + tau, "interception", (i, j), f"range={rng:.6g}m"))

        for i in live_ids:
            p_new, v_new = _advance(pos[i], vel[i], applied[i], dt, spec_by_id[i].bounds.v_max)
            pos[i] = p_new
            vel[i] = v_new

        step_events.sort(key=lambda ev: (ev.time, ev.kind, ev.agents))
        for ev in step_events:
            if not all(alive[a] for a in ev.agents):
                continue
            log.events.append(ev)
            if ev.kind == "collision":
                collisions += 1
                if first_collision is None:
                    first_collision = ev.time
            else:
                interceptions += 1
            for agent in ev.agents:
                alive[agent] = False

        if not any(alive[j] for j in target_ids):
            break

    log.outcome = RunOutcome(
        interceptions=interceptions,
        collisions=collisions,
        min_effector_separation=min_sep,
        first_collision_time=first_collision,
        filter_activations=activations,
        slack_total=run_slack,
    )
    return log


def _end_range(pos, vel, acc, i: int, j: int, dt: float) -> float:
    half = 0.5 * dt * dt
    pi = pos[i]
    vi = vel[i]
    ai = acc[i]
    pj = pos[j]
    vj = vel[j]
    aj = acc[j]
    dx = (pi[0] + vi[0] * dt + ai[0] * half) - (pj[0] + vj[0] * dt + aj[0] * half)
    dy = (pi[1] + vi[1] * dt + ai[1] * half) - (pj[1] + vj[1] * dt + aj[1] * half)
    dz = (pi[2] + vi[2] * dt + ai[2] * half) - (pj[2] + vj[2] * dt + aj[2] * half)
    return math.sqrt(dx * dx + dy * dy + dz * dz)
