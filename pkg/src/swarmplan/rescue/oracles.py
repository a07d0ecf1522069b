"""Greedy baseline and exact multi-vehicle-routing topline for rescue.

The baseline sends every ambulance to its Chebyshev-nearest open victim.
The topline solves the rescue instance exactly: a subset-path dynamic
program gives the optimal open tour over every victim subset from every
starting victim, and branch-and-bound over victim-to-ambulance labelings
finds the partition minimizing the slowest ambulance's route time.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..assign import UNASSIGNED, Assignment
from .env import GridState, RescueError, chebyshev

MVR_MAX_AGENTS = 8
MVR_MAX_TASKS = 15


def closest_baseline(state: GridState) -> Assignment:
    """Each ambulance targets the nearest open victim (lowest index on ties)."""
    target = np.full(state.n, UNASSIGNED, dtype=int)
    open_victims = [(j, (x, y)) for j, (x, y, p) in enumerate(state.victims) if not p]
    if open_victims:
        for i, pos in enumerate(state.ambulances):
            target[i] = min(open_victims, key=lambda jv: (chebyshev(pos, jv[1]), jv[0]))[0]
    return Assignment(target)


@dataclass
class SubsetPathTable:
    """table[mask, v] = shortest tour visiting the victims in mask starting at v.

    Entries for v not in mask are +inf; table[1 << v, v] = 0.
    """

    positions: list
    table: np.ndarray  # (2**m, m)

    @property
    def m(self) -> int:
        return len(self.positions)


@lru_cache(maxsize=None)
def _masks_by_popcount(m: int):
    masks = np.arange(1, 1 << m)
    counts = np.array([bin(x).count("1") for x in masks])
    return [masks[counts == c] for c in range(1, m + 1)]


def dp_subset_paths(victim_positions) -> SubsetPathTable:
    """Held-Karp over victim subsets under the Chebyshev metric.

    Starting at v and visiting mask is the reverse of ending at v, and
    the metric is symmetric, so one anchored table serves both readings.
    """
    positions = [tuple(p) for p in victim_positions]
    m = len(positions)
    if not 1 <= m <= MVR_MAX_TASKS:
        raise RescueError(f"victim count {m} outside [1, {MVR_MAX_TASKS}]")
    D = np.array([[chebyshev(a, b) for b in positions] for a in positions], dtype=float)
    table = np.full((1 << m, m), np.inf)
    for v in range(m):
        table[1 << v, v] = 0.0
    layers = _masks_by_popcount(m)
    for size in range(2, m + 1):
        for mask in layers[size - 1]:
            for v in range(m):
                if mask & (1 << v):
                    # leave v first, then optimally cover the rest
                    table[mask, v] = np.min(D[v] + table[mask ^ (1 << v)])
    return SubsetPathTable(positions, table)


def _route_order(paths: SubsetPathTable, mask: int, start: int):
    """Recover one optimal visiting order for (mask, start)."""
    D = paths.positions
    order = [start]
    v = start
    while mask != (1 << v):
        rest = mask ^ (1 << v)
        best = None
        for u in range(paths.m):
            if rest & (1 << u):
                cost = chebyshev(D[v], D[u]) + paths.table[rest, u]
                if abs(cost - paths.table[mask, v]) < 1e-9:
                    best = u
                    break
        if best is None:  # numeric fallback: take the argmin successor
            cands = [(chebyshev(D[v], D[u]) + paths.table[rest, u], u)
                     for u in range(paths.m) if rest & (1 << u)]
            best = min(cands)[1]
        order.append(best)
        mask, v = rest, best
    return order


@dataclass
class RoutePlan:
    routes: list      # per-ambulance ordered victim index lists
    makespan: int


def _set_cost(amb_dists, paths, mask: int) -> float:
    """Optimal route time for one ambulance over the victims in mask."""
    if mask == 0:
        return 0.0
    best = np.inf
    for v in range(paths.m):
        if mask & (1 << v):
            best = min(best, amb_dists[v] + paths.table[mask, v])
    return best


def mvr_exact(state: GridState) -> RoutePlan:
    """Exact min-makespan victim partition + per-set optimal tours.

    Branch-and-bound over victim-to-ambulance labelings; the partial
    makespan is a valid bound because adding victims to a set never
    shortens its tour.
    """
    n = state.n
    open_idx = [j for j, (_, _, p) in enumerate(state.victims) if not p]
    if n > MVR_MAX_AGENTS or len(open_idx) > MVR_MAX_TASKS:
        raise RescueError(
            f"instance {n}x{len(open_idx)} beyond exact-solver budget "
            f"({MVR_MAX_AGENTS}x{MVR_MAX_TASKS})"
        )
    if not open_idx:
        return RoutePlan([[] for _ in range(n)], 0)
    positions = [state.victims[j][:2] for j in open_idx]
    paths = dp_subset_paths(positions)
    amb_dists = [np.array([chebyshev(a, v) for v in positions], dtype=float)
                 for a in state.ambulances]
    m = len(open_idx)

    # Greedy incumbent: place each victim where it grows the makespan least.
    masks = [0] * n
    for v in range(m):
        best_i = min(range(n),
                     key=lambda i: _set_cost(amb_dists[i], paths, masks[i] | (1 << v)))
        masks[best_i] |= 1 << v
    incumbent = max(_set_cost(amb_dists[i], paths, masks[i]) for i in range(n))
    best_masks = list(masks)

    # Branch on victims farthest from the fleet first: their placement
    # constrains the makespan most, so bad branches die early.
    order = sorted(range(m),
                   key=lambda v: -min(d[v] for d in amb_dists))

    def descend(k: int, cur_masks, worst: float):
        nonlocal incumbent, best_masks
        if worst >= incumbent:
            return
        if k == m:
            incumbent = worst
            best_masks = list(cur_masks)
            return
        v = order[k]
        trials = []
        for i in range(n):
            c = _set_cost(amb_dists[i], paths, cur_masks[i] | (1 << v))
            if max(worst, c) < incumbent:
                trials.append((c, i))
        for c, i in sorted(trials):
            saved = cur_masks[i]
            cur_masks[i] |= 1 << v
            descend(k + 1, cur_masks, max(worst, c))
            cur_masks[i] = saved

    descend(0, [0] * n, 0.0)

    routes = []
    for i in range(n):
        mask = best_masks[i]
        if mask == 0:
            routes.append([])
            continue
        start = min((amb_dists[i][v] + paths.table[mask, v], v)
                    for v in range(m) if mask & (1 << v))[1]
        routes.append([open_idx[v] for v in _route_order(paths, mask, start)])
    makespan = max(_set_cost(amb_dists[i], paths, best_masks[i]) for i in range(n))
    return RoutePlan(routes, int(round(makespan)))


def plan_policy(plan: RoutePlan):
    """Policy executing a RoutePlan: each ambulance chases the first
    still-open victim on its route."""
    def policy(state: GridState) -> Assignment:
        target = np.full(state.n, UNASSIGNED, dtype=int)
        for i, route in enumerate(plan.routes):
            pos = state.ambulances[i]
            for j in route:
                x, y, picked = state.victims[j]
                # A victim under the ambulance is collected by the
                # spawn-overlap sweep; chase the next one instead.
                if not picked and (x, y) != pos:
                    target[i] = j
                    break
        return Assignment(target)
    return policy
