"""Pairwise range barrier, its robustified form, and the acceleration constraint.

The barrier h = r_s^2 - |r|^2 is non-positive exactly when the pair is
separated by at least the safety distance. Because the control input enters
only in the second derivative, the filter constrains the robustified value

    H = h + |h_dot| * h_dot / (2 * a_max),

which predicts the peak of h under a constant worst-case braking rate a_max.
a_max exists only while the control authority satisfies u_max > v_max^2 / r_s;
it is a scenario-level constant here because the braking argument bounds
h_ddot uniformly over the safe set.

Enforcing H_dot <= alpha(-H) with a linear class-K alpha yields one linear
half-space on the agent's own acceleration:

    -2*|h_dot| * r . a_i <= a_max*(gain*(-H) - h_dot) + 2*|h_dot|*|v|^2 - 2*|h_dot| * r . a_j

with a_j = -a_i assumed for a cooperating neighbor (doubling the coefficient)
and a_j = 0 for a non-cooperative one.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import PhysicalBounds
from .geometry import PairGeometry
from .vecmath import Vec3, dot, scale

# |h_dot| below this leaves no usable coefficient on the acceleration: the
# constraint reduces to a condition that holds on the safe set regardless of
# the input, so the row is dropped.
DEGENERATE_H_DOT = 1e-9


class InfeasibleSafetyMarginError(ValueError):
    """Safety distance too small for the available control authority."""


@dataclass(frozen=True, slots=True)
class BarrierEval:
    h: float
    h_dot: float
    big_h: float
    a_max: float


@dataclass(frozen=True, slots=True)
class SafetyConstraint:
    neighbor_id: int
    coeff: Vec3
    rhs: float
    weight: float
    cooperative: bool
    barrier: BarrierEval


def rcbf_a_max(r_s: float, bounds: PhysicalBounds, kappa: float) -> float:
    """Assured braking constant for the range barrier, scaled by kappa."""
    margin = 4.0 * r_s * bounds.u_max - 4.0 * bounds.v_max * bounds.v_max
    if margin <= 0.0:
        raise InfeasibleSafetyMarginError(
            f"r_s={r_s} does not exceed v_max^2/u_max="
            f"{bounds.v_max * bounds.v_max / bounds.u_max}"
        )
    return kappa * margin


def barrier_eval(pair: PairGeometry, r_s: float, a_max: float) -> BarrierEval:
    h = -pair.range * pair.range + r_s * r_s
    h_dot = -2.0 * dot(pair.r_ij, pair.v_ij)
    big_h = h + abs(h_dot) * h_dot / (2.0 * a_max)
    return BarrierEval(h=h, h_dot=h_dot, big_h=big_h, a_max=a_max)


def constraint_row(
    pair: PairGeometry,
    eval: BarrierEval,
    alpha_gain: float,
    cooperative: bool,
    velocity_sq: float,
    neighbor_id: int = -1,
    weight: float = 1.0,
) -> SafetyConstraint | None:
    """Half-space on the agent's acceleration, or None when degenerate."""
    mag = abs(eval.h_dot)
    if mag < DEGENERATE_H_DOT:
        return None
    factor = -4.0 * mag if cooperative else -2.0 * mag
    coeff = scale(pair.r_ij, factor)
    rhs = eval.a_max * (alpha_gain * (-eval.big_h) - eval.h_dot) + 2.0 * mag * velocity_sq
    return SafetyConstraint(
        neighbor_id=neighbor_id,
        coeff=coeff,
        rhs=rhs,
        weight=weight,
        cooperative=cooperative,
        barrier=eval,
    )
