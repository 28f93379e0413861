"""Pure proportional navigation guidance.

The commanded acceleration is N * |v_rel| * (los_rate x los_unit), with the
line of sight taken from the effector to its assigned target. It is exactly
perpendicular to the LOS and is returned unsaturated; enforcing the physical
acceleration limit is the caller's job so the downstream safety filter sees
the raw nominal command.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import AgentState
from .vecmath import Vec3, cross, norm, norm_sq, scale, sub

RANGE_FLOOR = 1.0  # m; below this separation the LOS direction is meaningless


class DegenerateRangeError(ValueError):
    """Raised when effector and target are too close for a usable LOS."""


@dataclass(frozen=True, slots=True)
class GuidanceCommand:
    accel: Vec3
    los_rate: Vec3
    closing_speed: float


def png_command(effector: AgentState, target: AgentState, nav_constant: float) -> GuidanceCommand:
    """Proportional navigation command for one effector/target pair."""
    los = sub(target.position, effector.position)
    r_sq = norm_sq(los)
    if r_sq <= RANGE_FLOOR * RANGE_FLOOR:
        raise DegenerateRangeError(
            f"effector-target range {r_sq ** 0.5:.3g} m is at or below {RANGE_FLOOR} m"
        )
    v_rel = sub(target.velocity, effector.velocity)
    los_rate = scale(cross(los, v_rel), 1.0 / r_sq)
    closing_speed = norm(v_rel)
    los_unit = scale(los, 1.0 / (r_sq ** 0.5))
    accel = scale(cross(los_rate, los_unit), nav_constant * closing_speed)
    return GuidanceCommand(accel=accel, los_rate=los_rate, closing_speed=closing_speed)
