"""Feature extraction for the battle scoring networks.

Per-unit features (8 + one-hot width - 1 values): position, velocity,
normalized health, weapon range, cooldown fraction, and a one-hot of
the unit type. Pair extras carry the previous-target flag and the
normalized distance, which the pairwise net cannot reconstruct from
independent unit features.
"""
from __future__ import annotations

import numpy as np

from .sim import ARENA, BattleState

BASE_FEATURES = 7  # x, y, vx, vy, health, range, cooldown fraction


def feature_dim(state: BattleState) -> int:
    return BASE_FEATURES + len(state.type_ids)


def _unit_features(unit, type_ids):
    onehot = [1.0 if unit.spec.type_id == t else 0.0 for t in type_ids]
    return [
        unit.pos[0] / ARENA,
        unit.pos[1] / ARENA,
        float(unit.velocity[0]),
        float(unit.velocity[1]),
        unit.health / unit.spec.max_health,
        unit.spec.attack_range / ARENA,
        unit.cooldown_remaining / unit.spec.cooldown_frames,
        *onehot,
    ]


def extract_battle_features(state: BattleState):
    """Returns (agent features (n,F), task features (m,F), pair extras
    (n,m,2)); dead units keep rows (health 0) so indices stay stable."""
    agents = np.array([_unit_features(u, state.type_ids) for u in state.ours])
    tasks = np.array([_unit_features(u, state.type_ids) for u in state.theirs])
    n, m = len(state.ours), len(state.theirs)
    extras = np.zeros((n, m, 2))
    for i, u in enumerate(state.ours):
        for j, e in enumerate(state.theirs):
            extras[i, j, 0] = 1.0 if state.prev_targets[i] == j else 0.0
            extras[i, j, 1] = float(np.linalg.norm(u.pos - e.pos)) / ARENA
    return agents, tasks, extras
