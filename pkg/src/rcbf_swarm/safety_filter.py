"""Per-agent safety filtering: triggers, weighted constraint rows, relaxed QP.

Every triggered, non-degenerate neighbor contributes one half-space row with
a state-dependent criticality weight; the relaxed QP then finds the smallest
deviation from the nominal command that honors the rows, spending slack on
the cheapest (least critical) rows when they conflict. The result is
radially saturated to the agent's acceleration limit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .barrier import SafetyConstraint, barrier_eval, constraint_row, rcbf_a_max
from .core import EFFECTOR, AgentState, PhysicalBounds, ScenarioConfig
from .geometry import PairGeometry, neighbors, pair_geometry, trigger
from .qp import QpProblem, QpRow, solve
from .vecmath import Vec3, clamp_norm, norm_sq

_IDENTITY_W = np.eye(3)


@dataclass(frozen=True, slots=True)
class PairDiagnostics:
    neighbor_id: int
    h: float
    big_h: float
    zem: float
    t_zem: float
    weight: float
    slack: float


@dataclass(frozen=True, slots=True)
class FilterDiagnostics:
    active_neighbor_ids: tuple[int, ...] = ()
    constraints_built: int = 0
    slack_total: float = 0.0
    saturated: bool = False
    qp_objective: float = 0.0
    per_pair: tuple[PairDiagnostics, ...] = ()
    qp_active_count: int = 0
    intervened: bool = False
    active_rows: tuple[int, ...] = ()


def criticality_weight(pair: PairGeometry, w_0: float, k_d: float, k_t: float, eps: float) -> float:
    """Baseline weight plus proximity and urgency terms; diverging pairs get
    the maximal urgency term through the clamp at zero time-to-go."""
    t_plus = pair.t_zem if pair.t_zem > 0.0 else 0.0
    return w_0 + k_d / (eps + pair.range) + k_t / (eps + t_plus)


def scenario_a_max(cfg: ScenarioConfig) -> float:
    """Scenario-level braking constant from the worst effector pairing."""
    effectors = cfg.effectors()
    v_max = max(a.bounds.v_max for a in effectors)
    u_max = min(a.bounds.u_max for a in effectors)
    return rcbf_a_max(cfg.safety.r_s, PhysicalBounds(v_max=v_max, u_max=u_max), cfg.safety.a_max_fraction)


def filter_step(
    self_id: int,
    states: Mapping[int, AgentState],
    nominal: Vec3,
    cfg: ScenarioConfig,
    link_status: Mapping[int, bool] | None = None,
    a_max: float | None = None,
    warm_start: Iterable[int] | None = None,
) -> tuple[Vec3, FilterDiagnostics]:
    """Filtered acceleration command for one effector plus full diagnostics.

    ``states`` is an immutable snapshot of all live agents; calls for
    different agents within one step are independent.
    """
    spec = cfg.agent(self_id)
    positions = {i: s.position for i, s in states.items()}
    roles = {i: cfg.agent(i).role for i in states}
    safety = cfg.safety

    candidates = neighbors(self_id, positions, roles, safety.r_neigh)
    rows: list[SafetyConstraint] = []
    built_pairs: list[PairGeometry] = []
    for j in candidates:
        pg = pair_geometry(states[self_id], states[j])
        if not trigger(pg, safety.r_crit, safety.eta):
            continue
        if a_max is None:
            a_max = scenario_a_max(cfg)
        weight = criticality_weight(pg, cfg.weights.w_0, cfg.weights.k_d, cfg.weights.k_t, cfg.weights.epsilon)
        cooperative = (
            link_status[j] if link_status is not None and j in link_status else cfg.sim.cooperative_links
        )
        row = constraint_row(
            pg,
            barrier_eval(pg, safety.r_s, a_max),
            safety.alpha_gain,
            cooperative,
            norm_sq(pg.v_ij),
            neighbor_id=j,
            weight=weight,
        )
        if row is None:
            continue
        rows.append(row)
        built_pairs.append(pg)

    if not rows:
        return nominal, FilterDiagnostics()

    problem = QpProblem(
        nominal=nominal,
        weight_matrix=_IDENTITY_W,
        rows=tuple(
            QpRow(coeff=r.coeff, rhs=r.rhs, slack_weight=r.weight, relaxable=True) for r in rows
        ),
        slack_reg=cfg.slack.regularization,
    )
    sol = solve(problem, warm_start=warm_start)

    accel = clamp_norm(sol.accel, spec.bounds.u_max)
    saturated = accel is not sol.accel
    per_pair = tuple(
        PairDiagnostics(
            neighbor_id=row.neighbor_id,
            h=row.barrier.h,
            big_h=row.barrier.big_h,
            zem=pg.zem,
            t_zem=pg.t_zem,
            weight=row.weight,
            slack=sol.slacks[k],
        )
        for k, (row, pg) in enumerate(zip(rows, built_pairs))
    )
    diag = FilterDiagnostics(
        active_neighbor_ids=tuple(r.neighbor_id for r in rows),
        constraints_built=len(rows),
        slack_total=sum(sol.slacks),
        saturated=saturated,
        qp_objective=sol.objective,
        per_pair=per_pair,
        qp_active_count=len(sol.active_set),
        intervened=sol.accel != nominal,
        active_rows=sol.active_set,
    )
    return accel, diag
