"""Pairwise scoring networks (the Direct Model).

The agent-task score h[i, j] depends only on the features of agent i,
task j and the optional extra features of that pair; the task-task score
g[j, l] only on the two task feature vectors. This locality is what lets
a model trained on small instances run unchanged on larger ones.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..assign import ScoreTable
from .mlp import HIDDEN, MlpParams, NetError, init_mlp, mlp_backward_batch, mlp_forward_batch


@dataclass
class ScoringModel:
    h_net: MlpParams
    g_net: MlpParams | None
    feature_dim_agent: int
    feature_dim_task: int
    pair_extra_dim: int = 0

    def __post_init__(self):
        expect_h = self.feature_dim_agent + self.feature_dim_task + self.pair_extra_dim
        if self.h_net.in_dim != expect_h:
            raise NetError(f"h_net expects input {self.h_net.in_dim}, features give {expect_h}")
        if self.g_net is not None and self.g_net.in_dim != 2 * self.feature_dim_task:
            raise NetError(
                f"g_net expects input {self.g_net.in_dim}, features give {2 * self.feature_dim_task}"
            )

    def copy(self) -> "ScoringModel":
        return ScoringModel(
            self.h_net.copy(),
            self.g_net.copy() if self.g_net is not None else None,
            self.feature_dim_agent,
            self.feature_dim_task,
            self.pair_extra_dim,
        )


def init_scoring_model(
    feature_dim_agent: int,
    feature_dim_task: int,
    pair_extra_dim: int = 0,
    with_g: bool = True,
    seed: int = 0,
) -> ScoringModel:
    rng = np.random.default_rng(seed)
    h_net = init_mlp(
        [feature_dim_agent + feature_dim_task + pair_extra_dim, HIDDEN, HIDDEN, 1], rng
    )
    g_net = init_mlp([2 * feature_dim_task, HIDDEN, HIDDEN, 1], rng) if with_g else None
    return ScoringModel(h_net, g_net, feature_dim_agent, feature_dim_task, pair_extra_dim)


def _pair_inputs(model, agent_feats, task_feats, pair_extras):
    A = np.asarray(agent_feats, dtype=float)
    T = np.asarray(task_feats, dtype=float)
    if A.ndim != 2 or A.shape[1] != model.feature_dim_agent:
        raise NetError(f"agent features shape {A.shape} != (n, {model.feature_dim_agent})")
    if T.ndim != 2 or T.shape[1] != model.feature_dim_task:
        raise NetError(f"task features shape {T.shape} != (m, {model.feature_dim_task})")
    n, m = A.shape[0], T.shape[0]
    parts = [np.repeat(A, m, axis=0), np.tile(T, (n, 1))]
    if model.pair_extra_dim:
        E = np.asarray(pair_extras, dtype=float)
        if E.shape != (n, m, model.pair_extra_dim):
            raise NetError(f"pair extras shape {E.shape} != ({n}, {m}, {model.pair_extra_dim})")
        parts.append(E.reshape(n * m, model.pair_extra_dim))
    elif pair_extras is not None:
        raise NetError("model takes no pair extras")
    return np.hstack(parts), n, m


def _task_pair_inputs(model, task_feats):
    T = np.asarray(task_feats, dtype=float)
    m = T.shape[0]
    return np.hstack([np.repeat(T, m, axis=0), np.tile(T, (m, 1))]), m


def score_pairs(model: ScoringModel, agent_feats, task_feats, pair_extras=None,
                with_cache: bool = False):
    """Evaluate h (and g if the model has a g_net) on all pairs.

    Returns a ScoreTable; with_cache=True also returns the activation
    caches needed by score_pairs_backward.
    """
    X_h, n, m = _pair_inputs(model, agent_feats, task_feats, pair_extras)
    h_out, h_cache = mlp_forward_batch(model.h_net, X_h)
    h = h_out.reshape(n, m)
    g = None
    g_cache = None
    if model.g_net is not None:
        X_g, m2 = _task_pair_inputs(model, task_feats)
        g_out, g_cache = mlp_forward_batch(model.g_net, X_g)
        g = g_out.reshape(m2, m2)
    table = ScoreTable(h, g)
    if with_cache:
        return table, (h_cache, g_cache, n, m)
    return table


def score_pairs_backward(model: ScoringModel, cache, dH: np.ndarray, dG=None):
    """Parameter gradients of sum(dH * h) + sum(dG * g).

    Returns (h_net grads, g_net grads or None), mirroring the layer lists.
    """
    h_cache, g_cache, n, m = cache
    h_grads, _ = mlp_backward_batch(model.h_net, h_cache, dH.reshape(n * m, 1))
    g_grads = None
    if dG is not None:
        if model.g_net is None or g_cache is None:
            raise NetError("dG given but the model has no g_net cache")
        g_grads, _ = mlp_backward_batch(model.g_net, g_cache, np.asarray(dG).reshape(m * m, 1))
    return h_grads, g_grads
