"""Inference procedures: argmax, LP relaxation, Frank-Wolfe QP, rounding,
and the exhaustive oracle.

Conventions shared by every operation:
  * tie-breaks are deterministic (lowest index / highest score) so repeated
    calls on identical inputs return identical results;
  * the quadratic objective sums over all index quadruples, including the
    self-pairs i == k.
"""
from __future__ import annotations

import itertools

import numpy as np

from .simplex import PolytopeLp
from .types import (
    FEAS_EPS,
    UNASSIGNED,
    AssignError,
    Assignment,
    ConstraintSet,
    FwConfig,
    RelaxedAssignment,
    ScoreTable,
)

BRUTE_FORCE_BUDGET = 10**7


def _check_dims(scores: ScoreTable, cons: ConstraintSet):
    if (scores.n, scores.m) != (cons.n, cons.m):
        raise AssignError(
            f"score table is {scores.n}x{scores.m} but constraints are {cons.n}x{cons.m}"
        )


def _as_beta(assign, m: int) -> np.ndarray:
    if isinstance(assign, Assignment):
        return assign.to_matrix(m)
    if isinstance(assign, RelaxedAssignment):
        return assign.beta
    raise AssignError(f"expected Assignment or RelaxedAssignment, got {type(assign).__name__}")


def amax_assign(scores: ScoreTable) -> Assignment:
    """Assign each agent to its highest-scoring task, ignoring all others."""
    return Assignment(np.argmax(scores.h, axis=1))


def objective_value(assign, scores: ScoreTable) -> float:
    """Linear + quadratic objective of an assignment under a score table."""
    beta = _as_beta(assign, scores.m)
    if beta.shape != scores.h.shape:
        raise AssignError(f"assignment shape {beta.shape} does not match scores {scores.h.shape}")
    value = float(np.sum(beta * scores.h))
    if scores.g is not None:
        r = beta.sum(axis=0)
        value += float(r @ scores.g @ r)
    return value


def feasible(assign: Assignment, cons: ConstraintSet) -> bool:
    """True iff every task's assigned contribution stays within capacity."""
    if assign.n != cons.n:
        raise AssignError(f"assignment has {assign.n} agents, constraints {cons.n}")
    load = np.zeros(cons.m)
    for i, j in enumerate(assign.target):
        if j != UNASSIGNED:
            if not 0 <= j < cons.m:
                raise AssignError(f"target {j} out of range for m={cons.m}")
            load[j] += cons.mu[i, j]
    return bool(np.all(load <= cons.u + FEAS_EPS))


def _polytope_lp(weights: np.ndarray, cons: ConstraintSet,
                 lp: PolytopeLp | None = None) -> RelaxedAssignment:
    """max <weights, beta> over the relaxed polytope via the simplex engine."""
    if lp is None:
        lp = PolytopeLp(cons.mu, cons.u)
    return RelaxedAssignment(lp.solve(weights))


def lp_relax_solve(scores: ScoreTable, cons: ConstraintSet) -> RelaxedAssignment:
    """Solve the linear relaxation of the constrained assignment ILP.

    The task-task table g, if present, is ignored.
    """
    _check_dims(scores, cons)
    return _polytope_lp(scores.h, cons)


def fw_linear_oracle(gradient: np.ndarray, cons: ConstraintSet) -> RelaxedAssignment:
    """Vertex of the relaxed polytope maximizing <gradient, beta>."""
    gradient = np.asarray(gradient, dtype=float)
    if gradient.shape != (cons.n, cons.m):
        raise AssignError(f"gradient shape {gradient.shape} != ({cons.n}, {cons.m})")
    if not np.all(np.isfinite(gradient)):
        raise AssignError("gradient contains non-finite values")
    return _polytope_lp(gradient, cons)


def fw_line_search(
    current: RelaxedAssignment, vertex: RelaxedAssignment, scores: ScoreTable
) -> float:
    """Exact maximizer of the objective along (1-gamma)*current + gamma*vertex.

    The restriction of the (at most quadratic) objective to the segment is a
    1-D quadratic a*gamma^2 + b*gamma + const, maximized in closed form and
    clamped to [0, 1].
    """
    d = vertex.beta - current.beta
    b_lin = float(np.sum(d * scores.h))
    a_quad = 0.0
    if scores.g is not None:
        r_cur = current.beta.sum(axis=0)
        r_d = d.sum(axis=0)
        a_quad = float(r_d @ scores.g @ r_d)
        b_lin += float(r_d @ (scores.g + scores.g.T) @ r_cur)
    if abs(a_quad) <= 1e-12:
        return 1.0 if b_lin > 0 else 0.0
    if a_quad < 0:
        return float(np.clip(-b_lin / (2.0 * a_quad), 0.0, 1.0))
    # convex along the segment: best endpoint
    return 1.0 if a_quad + b_lin > 0 else 0.0


def quad_relax_solve(
    scores: ScoreTable,
    cons: ConstraintSet,
    cfg: FwConfig | None = None,
    start: RelaxedAssignment | None = None,
) -> RelaxedAssignment:
    """Frank-Wolfe ascent on the quadratic objective over the relaxed polytope.

    Terminates when the FW gap <grad, v - beta> drops below
    cfg.gap_tol * (1 + |objective|), or after cfg.max_iters iterations.
    Converges to a local maximum (the objective need not be concave).
    """
    _check_dims(scores, cons)
    if scores.g is None:
        raise AssignError("quad_relax_solve requires a task-task score table g")
    if cfg is None:
        cfg = FwConfig()
    if start is None:
        beta = np.zeros((scores.n, scores.m))
    else:
        beta = start.beta.copy()
        if not RelaxedAssignment(beta).check_invariants(cons):
            raise AssignError("start point is infeasible")

    g_sym = scores.g + scores.g.T
    lp = PolytopeLp(cons.mu, cons.u)  # warm-started across FW iterations
    for _ in range(cfg.max_iters):
        r = beta.sum(axis=0)
        grad = scores.h + (g_sym @ r)[None, :]
        vertex = _polytope_lp(grad, cons, lp)
        gap = float(np.sum(grad * (vertex.beta - beta)))
        obj = objective_value(RelaxedAssignment(beta), scores)
        if gap <= cfg.gap_tol * (1.0 + abs(obj)):
            break
        gamma = fw_line_search(RelaxedAssignment(beta), vertex, scores)
        if gamma == 0.0:
            break
        beta = beta + gamma * (vertex.beta - beta)
    return RelaxedAssignment(np.clip(beta, 0.0, 1.0))


def greedy_round(
    relaxed: RelaxedAssignment, scores: ScoreTable, cons: ConstraintSet
) -> Assignment:
    """Round a fractional assignment to a feasible hard one.

    Agents are visited once, in descending order of their largest relaxed
    entry (ties: lower agent index). Each is placed on the non-saturated task
    with the largest relaxed entry (ties: higher h, then lower task index).
    Agents whose relaxed row is all zero, or for whom every task is
    saturated, stay unassigned.
    """
    _check_dims(scores, cons)
    beta = relaxed.beta
    if beta.shape != (cons.n, cons.m):
        raise AssignError(f"relaxed shape {beta.shape} != ({cons.n}, {cons.m})")
    n, m = cons.n, cons.m
    row_max = beta.max(axis=1)
    order = sorted(range(n), key=lambda i: (-row_max[i], i))
    load = np.zeros(m)
    target = np.full(n, UNASSIGNED)
    for i in order:
        if row_max[i] <= 0.0:
            continue
        best = None
        for j in range(m):
            if load[j] + cons.mu[i, j] > cons.u[j] + FEAS_EPS:
                continue
            key = (beta[i, j], scores.h[i, j], -j)
            if best is None or key > best[0]:
                best = (key, j)
        if best is not None:
            j = best[1]
            target[i] = j
            load[j] += cons.mu[i, j]
    return Assignment(target)


def polish_assignment(
    assign: Assignment, scores: ScoreTable, cons: ConstraintSet, max_passes: int = 10
) -> Assignment:
    """Deterministic single-agent hill climb on the full objective.

    Repeatedly scans agents in index order and applies the best feasible
    single-agent move (including moving to unassigned) that strictly
    improves the objective. Used after rounding a quadratic relaxation,
    where the fractional optimum can be agent-symmetric and plain greedy
    rounding collapses tied agents onto one task.
    """
    _check_dims(scores, cons)
    target = assign.target.copy()
    n, m = cons.n, cons.m
    h, g = scores.h, scores.g
    load = np.zeros(m)
    r = np.zeros(m)  # column sums of the hard assignment matrix
    for i, j in enumerate(target):
        if j != UNASSIGNED:
            load[j] += cons.mu[i, j]
            r[j] += 1.0
    g_sym_r = (g + g.T) @ r if g is not None else None
    for _ in range(max_passes):
        improved = False
        for i in range(n):
            old_j = target[i]
            # delta of moving agent i from old_j to new_j, computed
            # incrementally: linear part plus r' G r' - r G r with the
            # two-entry change vector
            # candidate order: tasks by index, then unassigned, so ties
            # prefer keeping agents on tasks
            deltas = np.empty(m + 1)
            for idx, new_j in enumerate([*range(m), UNASSIGNED]):
                if new_j == old_j:
                    deltas[idx] = 0.0
                    continue
                if new_j != UNASSIGNED and load[new_j] + cons.mu[i, new_j] > cons.u[new_j] + FEAS_EPS:
                    deltas[idx] = -np.inf
                    continue
                delta = 0.0
                if old_j != UNASSIGNED:
                    delta -= h[i, old_j]
                if new_j != UNASSIGNED:
                    delta += h[i, new_j]
                if g is not None:
                    if old_j != UNASSIGNED:
                        delta -= g_sym_r[old_j] - g[old_j, old_j]
                    if new_j != UNASSIGNED:
                        delta += g_sym_r[new_j] + g[new_j, new_j]
                    if old_j != UNASSIGNED and new_j != UNASSIGNED:
                        delta -= g[old_j, new_j] + g[new_j, old_j]
                deltas[idx] = delta
            best_idx = int(np.argmax(deltas))
            best_j = UNASSIGNED if best_idx == m else best_idx
            if deltas[best_idx] > 1e-12 and best_j != old_j:
                if old_j != UNASSIGNED:
                    load[old_j] -= cons.mu[i, old_j]
                    r[old_j] -= 1.0
                    if g is not None:
                        g_sym_r -= g[old_j, :] + g[:, old_j]
                if best_j != UNASSIGNED:
                    load[best_j] += cons.mu[i, best_j]
                    r[best_j] += 1.0
                    if g is not None:
                        g_sym_r += g[best_j, :] + g[:, best_j]
                target[i] = best_j
                improved = True
        if not improved:
            break
    return Assignment(target)


def round_quad(
    relaxed: RelaxedAssignment, scores: ScoreTable, cons: ConstraintSet
) -> Assignment:
    """Rounding used for the quadratic procedure: greedy rounding plus the
    single-move polish, so grouping/spreading preferences encoded in g
    survive discretization."""
    return polish_assignment(greedy_round(relaxed, scores, cons), scores, cons)


def brute_force_assign(scores: ScoreTable, cons: ConstraintSet) -> Assignment:
    """Exhaustive maximizer over all feasible hard assignments (test oracle).

    Enumerates every target vector in {unassigned, 0, .., m-1}^n; ties are
    broken lexicographically with unassigned ordered first.
    """
    _check_dims(scores, cons)
    n, m = scores.n, scores.m
    if (m + 1) ** n > BRUTE_FORCE_BUDGET:
        raise AssignError(f"instance too large for enumeration: (m+1)^n = {(m + 1) ** n}")
    best_value = -np.inf
    best_target = None
    for combo in itertools.product(range(-1, m), repeat=n):
        assign = Assignment(np.array(combo))
        if not feasible(assign, cons):
            continue
        value = objective_value(assign, scores)
        if value > best_value + 1e-12:
            best_value = value
            best_target = combo
    return Assignment(np.array(best_target))
