"""Relative engagement geometry: closest-approach prediction and triggering.

For a pair with relative position r and relative velocity v, the
constant-velocity extrapolation r + T*v is closest at
T = -(r . v)/|v|^2; the miss distance at that time is the zero-effort miss.
A pair generates a safety constraint only while the trigger fires.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

from .core import EFFECTOR, AgentState
from .vecmath import Vec3, add, dist, dot, norm_sq, scale, sub

# Below this |v_rel|^2 the pair is effectively co-moving: no closest-approach
# time exists, so the range gate alone governs triggering.
_CO_MOVING_SQ = 1e-12


@dataclass(frozen=True, slots=True)
class PairGeometry:
    r_ij: Vec3
    v_ij: Vec3
    range: float
    t_zem: float
    zem: float


def pair_geometry(a: AgentState, b: AgentState) -> PairGeometry:
    r = sub(a.position, b.position)
    v = sub(a.velocity, b.velocity)
    rng = math.sqrt(norm_sq(r))
    v_sq = norm_sq(v)
    if v_sq < _CO_MOVING_SQ:
        return PairGeometry(r_ij=r, v_ij=v, range=rng, t_zem=0.0, zem=rng)
    t_zem = -dot(r, v) / v_sq
    zem = math.sqrt(norm_sq(add(r, scale(v, t_zem))))
    return PairGeometry(r_ij=r, v_ij=v, range=rng, t_zem=t_zem, zem=zem)


def neighbors(
    self_id: int,
    positions: Mapping[int, Vec3],
    roles: Mapping[int, str],
    r_neigh: float,
) -> list[int]:
    """Effector ids within the closed ball of radius r_neigh, excluding self.

    Targets are engagement objectives, not collision-avoidance subjects, so
    only effector-role agents qualify.
    """
    own = positions[self_id]
    out = [
        other
        for other, pos in positions.items()
        if other != self_id and roles[other] == EFFECTOR and dist(own, pos) <= r_neigh
    ]
    out.sort()
    return out


def trigger(pair: PairGeometry, r_crit: float, eta: float) -> bool:
    """True iff the pair is close, converging, and predicted to pass too near."""
    return pair.range <= r_crit and pair.t_zem > 0.0 and pair.zem <= eta * r_crit
