"""Exact solver for the small dense slack-relaxed acceleration QP.

Problem (decision variables a in R^3 and one slack per relaxable row):

    minimize   (a - a_nom)' W (a - a_nom) + sum_k w_k d_k + rho * sum_k d_k^2
    subject to c_k' a <= b_k + d_k      (relaxable rows, d_k >= 0)
               c_k' a <= b_k            (hard rows)

The rho-regularization makes the lifted Hessian strictly positive definite,
so every subproblem has a unique minimizer; with rho -> 0 the slack penalty
is the exact linear one. Solved with a primal active-set method on the
lifted variable; each working-set subproblem is a dense KKT solve.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .vecmath import Vec3

MAX_ROWS = 64
FEAS_TOL = 1e-7  # relative to max(1, |rhs|)
DUAL_TOL = 1e-8


class QpError(RuntimeError):
    pass


class QpInfeasibleError(QpError):
    """Hard rows admit no common point; ``conflict`` is an irreducible subset."""

    def __init__(self, conflict: tuple[int, ...]):
        super().__init__(f"hard constraint rows {conflict} are jointly infeasible")
        self.conflict = conflict


class QpIterationLimitError(QpError):
    pass


@dataclass(frozen=True, slots=True)
class QpRow:
    coeff: Vec3
    rhs: float
    slack_weight: float = 1.0
    relaxable: bool = True


@dataclass(frozen=True)
class QpProblem:
    nominal: Vec3
    weight_matrix: np.ndarray
    rows: tuple[QpRow, ...]
    slack_reg: float = 1e-6


@dataclass(frozen=True)
class QpSolution:
    accel: Vec3
    slacks: tuple[float, ...]
    active_set: tuple[int, ...]
    objective: float
    kkt_residual: float
    multipliers: tuple[float, ...]
    iterations: int


def _feas_tol(rhs: float) -> float:
    return FEAS_TOL * max(1.0, abs(rhs))


def _objective(problem: QpProblem, a: np.ndarray, slacks: np.ndarray) -> float:
    d = a - np.asarray(problem.nominal)
    value = float(d @ problem.weight_matrix @ d)
    for k, row in enumerate(problem.rows):
        value += row.slack_weight * slacks[k] + problem.slack_reg * slacks[k] * slacks[k]
    return value


def kkt_residual(
    problem: QpProblem,
    accel: Sequence[float],
    slacks: Sequence[float],
    multipliers: Sequence[float],
) -> float:
    """Max of stationarity, dual-feasibility, complementarity and slack-pricing residuals."""
    a = np.asarray(accel, dtype=float)
    W = problem.weight_matrix
    grad = 2.0 * W @ (a - np.asarray(problem.nominal))
    worst_dual = 0.0
    worst_compl = 0.0
    worst_slack = 0.0
    for k, row in enumerate(problem.rows):
        lam = multipliers[k]
        c = np.asarray(row.coeff)
        grad = grad + lam * c
        worst_dual = max(worst_dual, -lam)
        worst_compl = max(worst_compl, abs(lam * (float(c @ a) - row.rhs - slacks[k])))
        if row.relaxable and slacks[k] > 0.0:
            worst_slack = max(
                worst_slack,
                abs(row.slack_weight + 2.0 * problem.slack_reg * slacks[k] - lam),
            )
    return max(float(np.linalg.norm(grad)), worst_dual, worst_compl, worst_slack)


def verify_kkt(problem: QpProblem, solution: QpSolution) -> float:
    return kkt_residual(problem, solution.accel, solution.slacks, solution.multipliers)


def _check_spd(W: np.ndarray) -> None:
    if W.shape != (3, 3) or not np.allclose(W, W.T, atol=1e-12):
        raise ValueError("weight matrix must be symmetric 3x3")
    try:
        np.linalg.cholesky(W)
    except np.linalg.LinAlgError as exc:
        raise ValueError("weight matrix must be positive definite") from exc


def _project_hard(
    W: np.ndarray, nominal: np.ndarray, rows: list[tuple[int, np.ndarray, float]]
) -> np.ndarray | None:
    """Exact W-metric projection of nominal onto an intersection of half-spaces.

    Enumerates candidate active subsets (at most 3 in R^3); returns None when
    the intersection is empty.
    """
    best: np.ndarray | None = None
    best_obj = math.inf
    indices = range(len(rows))
    for size in range(0, min(3, len(rows)) + 1):
        for subset in itertools.combinations(indices, size):
            C = np.array([rows[i][1] for i in subset]).reshape(size, 3)
            b = np.array([rows[i][2] for i in subset])
            kkt = np.zeros((3 + size, 3 + size))
            kkt[:3, :3] = 2.0 * W
            kkt[:3, 3:] = C.T
            kkt[3:, :3] = C
            rhs = np.concatenate([2.0 * W @ nominal, b])
            try:
                sol = np.linalg.solve(kkt, rhs)
            except np.linalg.LinAlgError:
                continue
            a, lam = sol[:3], sol[3:]
            if np.any(lam < -DUAL_TOL):
                continue
            if any(float(c @ a) > rv + _feas_tol(rv) for _, c, rv in rows):
                continue
            d = a - nominal
            obj = float(d @ W @ d)
            if obj < best_obj - 1e-15:
                best, best_obj = a, obj
    return best


def _irreducible_conflict(
    W: np.ndarray, nominal: np.ndarray, rows: list[tuple[int, np.ndarray, float]]
) -> tuple[int, ...]:
    kept = list(rows)
    for candidate in list(kept):
        trial = [r for r in kept if r is not candidate]
        if _project_hard(W, nominal, trial) is None:
            kept = trial
    return tuple(r[0] for r in kept)


def solve(problem: QpProblem, warm_start: Iterable[int] | None = None) -> QpSolution:
    """Global optimum of the relaxed QP with KKT certification."""
    rows = problem.rows
    m = len(rows)
    if m > MAX_ROWS:
        raise ValueError(f"row count {m} exceeds the supported bound of {MAX_ROWS}")
    W = np.asarray(problem.weight_matrix, dtype=float)
    _check_spd(W)
    for row in rows:
        if row.slack_weight <= 0.0:
            raise ValueError("every slack weight must be positive")
    if problem.slack_reg <= 0.0:
        raise ValueError("slack regularization must be positive")
    nominal = np.asarray(problem.nominal, dtype=float)

    if m == 0:
        return QpSolution(problem.nominal, (), (), 0.0, 0.0, (), 0)

    # Nominal already satisfies every row: it is the exact optimum, returned
    # bit-for-bit so an inactive filter is the identity.
    if all(float(np.dot(row.coeff, nominal)) <= row.rhs for row in rows):
        active = tuple(
            k
            for k, row in enumerate(rows)
            if abs(float(np.dot(row.coeff, nominal)) - row.rhs) <= _feas_tol(row.rhs)
        )
        return QpSolution(problem.nominal, (0.0,) * m, active, 0.0, 0.0, (0.0,) * m, 0)

    relax_idx = [k for k, row in enumerate(rows) if row.relaxable]
    pos = {k: j for j, k in enumerate(relax_idx)}
    n = 3 + len(relax_idx)

    G = np.zeros((n, n))
    G[:3, :3] = 2.0 * W
    for j in range(len(relax_idx)):
        G[3 + j, 3 + j] = 2.0 * problem.slack_reg
    c_lin = np.zeros(n)
    c_lin[:3] = -2.0 * W @ nominal
    for j, k in enumerate(relax_idx):
        c_lin[3 + j] = rows[k].slack_weight

    # Constraint catalogue: rows first, then the slack non-negativity bounds.
    A = np.zeros((m + len(relax_idx), n))
    b = np.zeros(m + len(relax_idx))
    for k, row in enumerate(rows):
        A[k, :3] = row.coeff
        if row.relaxable:
            A[k, 3 + pos[k]] = -1.0
        b[k] = row.rhs
    for j in range(len(relax_idx)):
        A[m + j, 3 + j] = -1.0
        b[m + j] = 0.0
    n_con = m + len(relax_idx)

    # Feasible start: project onto the hard rows if the nominal violates any.
    hard = [(k, np.asarray(rows[k].coeff, dtype=float), rows[k].rhs) for k in range(m) if not rows[k].relaxable]
    a0 = nominal.copy()
    if any(float(c @ a0) > rv + _feas_tol(rv) for _, c, rv in hard):
        projected = _project_hard(W, nominal, hard)
        if projected is None:
            raise QpInfeasibleError(_irreducible_conflict(W, nominal, hard))
        a0 = projected
    z = np.zeros(n)
    z[:3] = a0
    for j, k in enumerate(relax_idx):
        z[3 + j] = max(0.0, float(np.dot(rows[k].coeff, a0)) - rows[k].rhs)

    working: list[int] = []
    if warm_start is not None:
        for k in sorted(set(warm_start)):
            if 0 <= k < m and abs(float(A[k] @ z) - b[k]) <= _feas_tol(b[k]):
                working.append(k)

    cap = 100 * (m + 3)
    iterations = 0
    lam_working = np.zeros(0)
    while True:
        iterations += 1
        if iterations > cap:
            raise QpIterationLimitError(f"active-set iteration cap {cap} exceeded")
        g = G @ z + c_lin
        nw = len(working)
        kkt = np.zeros((n + nw, n + nw))
        kkt[:n, :n] = G
        if nw:
            Aw = A[working]
            kkt[:n, n:] = Aw.T
            kkt[n:, :n] = Aw
        rhs_vec = np.concatenate([-g, np.zeros(nw)])
        try:
            sol = np.linalg.solve(kkt, rhs_vec)
        except np.linalg.LinAlgError:
            sol = np.linalg.lstsq(kkt, rhs_vec, rcond=None)[0]
        p = sol[:n]
        lam_working = sol[n:]

        if float(np.max(np.abs(p), initial=0.0)) <= 1e-11 * max(1.0, float(np.linalg.norm(z))):
            if nw == 0 or float(lam_working.min()) >= -DUAL_TOL:
                break
            drop_pos = int(np.argmin(lam_working))  # ties: lowest position = lowest index
            working.pop(drop_pos)
            continue

        alpha = 1.0
        blocker = -1
        for j in range(n_con):
            if j in working:
                continue
            advance = float(A[j] @ p)
            if advance <= 1e-13:
                continue
            gap = b[j] - float(A[j] @ z)
            step = max(0.0, gap / advance)
            if step < alpha:
                alpha = step
                blocker = j
        z = z + alpha * p
        if blocker >= 0:
            working.append(blocker)

    accel_arr = z[:3]
    slacks = [0.0] * m
    for j, k in enumerate(relax_idx):
        value = float(z[3 + j])
        slacks[k] = value if value > 1e-12 * max(1.0, abs(rows[k].rhs)) else 0.0

    multipliers = [0.0] * m
    for lam, idx in zip(lam_working, working):
        if idx < m:
            multipliers[idx] = float(lam)

    active = tuple(
        k
        for k in range(m)
        if abs(float(np.dot(rows[k].coeff, accel_arr)) - rows[k].rhs - slacks[k]) <= _feas_tol(rows[k].rhs)
    )
    accel = (float(accel_arr[0]), float(accel_arr[1]), float(accel_arr[2]))
    slack_tuple = tuple(slacks)
    residual = kkt_residual(problem, accel, slack_tuple, multipliers)
    return QpSolution(
        accel=accel,
        slacks=slack_tuple,
        active_set=active,
        objective=_objective(problem, accel_arr, np.asarray(slacks)),
        kkt_residual=residual,
        multipliers=tuple(multipliers),
        iterations=iterations,
    )
