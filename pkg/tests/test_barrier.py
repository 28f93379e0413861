from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rcbf_swarm.barrier import (
    InfeasibleSafetyMarginError,
    barrier_eval,
    constraint_row,
    rcbf_a_max,
)
from rcbf_swarm.core import AgentState, PhysicalBounds
from rcbf_swarm.geometry import pair_geometry
from rcbf_swarm.vecmath import dot, norm, norm_sq, scale

BOUNDS = PhysicalBounds(v_max=306.0, u_max=392.4)


def geom(r, v):
    return pair_geometry(
        AgentState(tuple(map(float, r)), tuple(map(float, v))),
        AgentState((0.0, 0.0, 0.0), (0.0, 0.0, 0.0)),
    )


def test_a_max_reference_value():
    # 4*300*392.4 - 4*306^2 = 470880 - 374544 = 96336
    assert rcbf_a_max(300.0, BOUNDS, 1.0) == pytest.approx(96336.0, rel=1e-9)


def test_a_max_infeasible_at_boundary():
    r_s = BOUNDS.v_max**2 / BOUNDS.u_max
    with pytest.raises(InfeasibleSafetyMarginError):
        rcbf_a_max(r_s, BOUNDS, 1.0)


def test_a_max_linear_in_fraction():
    full = rcbf_a_max(300.0, BOUNDS, 1.0)
    assert rcbf_a_max(300.0, BOUNDS, 0.5) == pytest.approx(0.5 * full, rel=1e-15)


def test_barrier_zero_at_safety_distance():
    assert barrier_eval(geom((50, 0, 0), (-1, 0, 0)), 50.0, 1000.0).h == pytest.approx(0.0, abs=1e-12)


def test_barrier_stationary_relative_motion():
    ev = barrier_eval(geom((80, 0, 0), (0, 0, 0)), 50.0, 1000.0)
    assert ev.h_dot == 0.0
    assert ev.big_h == ev.h


def test_barrier_worked_example():
    ev = barrier_eval(geom((100, 0, 0), (-10, 0, 0)), 50.0, 1000.0)
    assert ev.h == pytest.approx(-7500.0, rel=1e-15)
    assert ev.h_dot == pytest.approx(2000.0, rel=1e-15)
    assert ev.big_h == pytest.approx(-5500.0, rel=1e-15)


def test_constraint_row_cooperative_worked_example():
    pg = geom((100, 0, 0), (-10, 0, 0))
    ev = barrier_eval(pg, 50.0, 1000.0)
    row = constraint_row(pg, ev, 1.0, True, norm_sq(pg.v_ij))
    assert row is not None
    assert row.coeff == pytest.approx((-8.0e5, 0.0, 0.0), rel=1e-15)
    assert row.rhs == pytest.approx(3.9e6, rel=1e-12)
    # the row reads coeff . a <= rhs, i.e. a_x >= -4.875
    assert row.rhs / row.coeff[0] == pytest.approx(-4.875, rel=1e-12)


def test_constraint_row_non_cooperative_halves_coefficient():
    pg = geom((100, 0, 0), (-10, 0, 0))
    ev = barrier_eval(pg, 50.0, 1000.0)
    coop = constraint_row(pg, ev, 1.0, True, norm_sq(pg.v_ij))
    solo = constraint_row(pg, ev, 1.0, False, norm_sq(pg.v_ij))
    assert solo.coeff == tuple(c / 2.0 for c in coop.coeff)
    assert solo.rhs == coop.rhs
    assert solo.rhs / solo.coeff[0] == pytest.approx(-9.75, rel=1e-12)


def test_degenerate_row_dropped():
    pg = geom((100, 0, 0), (0, 0, 0))
    ev = barrier_eval(pg, 50.0, 1000.0)
    assert constraint_row(pg, ev, 1.0, True, 0.0) is None


@settings(max_examples=200, deadline=None)
@given(
    rng=st.floats(10.0, 2000.0),
    closing=st.floats(-500.0, 500.0),
)
def test_sign_semantics(rng, closing):
    pg = geom((rng, 0, 0), (closing, 0, 0))
    ev = barrier_eval(pg, 300.0, 86702.4)
    assert (ev.h <= 0.0) == (rng >= 300.0)
    assert (ev.h_dot > 0.0) == (dot(pg.r_ij, pg.v_ij) < 0.0)


@settings(max_examples=300, deadline=None)
@given(
    direction=st.tuples(st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1)),
    rng=st.floats(300.0, 1200.0),
    v1=st.tuples(st.floats(-306, 306), st.floats(-306, 306), st.floats(-306, 306)),
    v2=st.tuples(st.floats(-306, 306), st.floats(-306, 306), st.floats(-306, 306)),
)
def test_evasive_input_satisfies_cooperative_row(direction, rng, v1, v2):
    """On the restricted safe set, full braking along the separation vector
    with a mirrored neighbor always satisfies the constraint row."""
    d = np.asarray(direction, dtype=float)
    if np.linalg.norm(d) < 1e-3:
        return
    if np.linalg.norm(v1) > 306.0 or np.linalg.norm(v2) > 306.0:
        return
    r = tuple(rng * d / np.linalg.norm(d))
    pg = pair_geometry(AgentState(r, tuple(v1)), AgentState((0.0, 0.0, 0.0), tuple(v2)))
    a_max = rcbf_a_max(300.0, BOUNDS, 0.9)
    ev = barrier_eval(pg, 300.0, a_max)
    if ev.h > 0.0 or ev.big_h > 0.0:
        return
    row = constraint_row(pg, ev, 1.0, True, norm_sq(pg.v_ij))
    if row is None:
        return
    evasive = scale(pg.r_ij, BOUNDS.u_max / norm(pg.r_ij))
    slack = row.rhs - dot(row.coeff, evasive)
    assert slack >= -1e-6 * max(1.0, abs(row.rhs))


@settings(max_examples=100, deadline=None)
@given(factor=st.floats(0.01, 50.0))
def test_coefficient_homogeneous_in_closing_rate(factor):
    pg = geom((400, 100, 0), (-40, -5, 0))
    fast = geom((400, 100, 0), (-40 * factor, -5 * factor, 0))
    ev = barrier_eval(pg, 300.0, 86702.4)
    ev_fast = barrier_eval(fast, 300.0, 86702.4)
    row = constraint_row(pg, ev, 1.0, True, norm_sq(pg.v_ij))
    row_fast = constraint_row(fast, ev_fast, 1.0, True, norm_sq(fast.v_ij))
    if row is None or row_fast is None:
        return
    assert row_fast.coeff == pytest.approx(tuple(factor * c for c in row.coeff), rel=1e-12)
