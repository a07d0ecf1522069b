"""Synchronous advantage actor-critic update.

The loss descended per batch of chunks is

    mean_t |R_t - V_t|  -  lam * mean_t ir_t * A_t * log l_t(new)

where R_t is the n-step return bootstrapped with the critic, the
advantage A_t = R_t - V_t and the importance ratio
ir_t = exp(log l_new - log l_old) are treated as constants (detached),
and log l_t is the Gaussian log-likelihood of the sampled score tables
under the current networks. Freezing R, A and ir at the evaluation point
makes the analytic gradient exactly the gradient of `frozen_objective`,
which is what the finite-difference tests check.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..nets import (
    CriticParams,
    ScoringModel,
    add_grads,
    critic_backward,
    critic_value,
    grads_to_vector,
    score_pairs,
    score_pairs_backward,
    zero_grads,
)
from .config import A2CConfig, LearnError, OPTIMIZERS
from .rollout import Chunk, gaussian_loglik

LOG_RATIO_CLIP = 20.0  # clamp log l_new - log l_old before exponentiating


def nstep_returns(chunk: Chunk, gamma: float, critic: CriticParams) -> list:
    """Discounted n-step returns, bootstrapped with V at the chunk tail."""
    if chunk.terminal_tail:
        tail = 0.0
    else:
        if chunk.bootstrap_entities is None:
            raise LearnError("non-terminal chunk without bootstrap entities")
        tail = critic_value(critic, chunk.bootstrap_entities)
    returns = [0.0] * len(chunk.steps)
    running = tail
    for t in range(len(chunk.steps) - 1, -1, -1):
        step = chunk.steps[t]
        running = step.reward if step.terminal else step.reward + gamma * running
        returns[t] = running
    return returns


class SgdOptimizer:
    """Plain gradient descent, updating (W, b) arrays in place."""

    def __init__(self, lr: float):
        self.lr = lr

    def step(self, params_list, grads_list):
        for params, grads in zip(params_list, grads_list):
            for (W, b), (gW, gb) in zip(params.layers, grads):
                W -= self.lr * gW
                b -= self.lr * gb


class AdamOptimizer:
    """Adam with bias correction, updating (W, b) arrays in place."""

    def __init__(self, lr: float, beta1: float = 0.9, beta2: float = 0.999,
                 eps: float = 1e-8):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.moments = None  # lazily shaped from the first gradient batch

    def step(self, params_list, grads_list):
        if self.moments is None:
            self.moments = [
                [(np.zeros_like(gW), np.zeros_like(gb),
                  np.zeros_like(gW), np.zeros_like(gb)) for gW, gb in grads]
                for grads in grads_list
            ]
        self.t += 1
        c1 = 1.0 - self.beta1 ** self.t
        c2 = 1.0 - self.beta2 ** self.t
        for params, grads, moms in zip(params_list, grads_list, self.moments):
            for (W, b), (gW, gb), (mW, mb, vW, vb) in zip(params.layers, grads, moms):
                for arr, g, m, v in ((W, gW, mW, vW), (b, gb, mb, vb)):
                    m *= self.beta1
                    m += (1.0 - self.beta1) * g
                    v *= self.beta2
                    v += (1.0 - self.beta2) * g * g
                    arr -= self.lr * (m / c1) / (np.sqrt(v / c2) + self.eps)


def make_optimizer(name: str, lr: float):
    if name not in OPTIMIZERS:
        raise LearnError(f"optimizer must be one of {OPTIMIZERS}")
    return AdamOptimizer(lr) if name == "adam" else SgdOptimizer(lr)


@dataclass
class FrozenTargets:
    """Per-chunk, per-step constants detached from the parameters."""

    returns: list
    advantages: list
    ratios: list


def _step_logliks(model: ScoringModel, step, sigma: float, with_cache=False):
    """log l of the sampled tables under the current model, plus caches."""
    out = score_pairs(model, step.obs.agent_feats, step.obs.task_feats,
                      pair_extras=step.obs.pair_extras, with_cache=with_cache)
    table, cache = out if with_cache else (out, None)
    log_l = gaussian_loglik(step.sampled_h, table.h, sigma)
    if step.sampled_g is not None:
        if table.g is None:
            raise LearnError("rollout sampled g but the model has no g_net")
        log_l += gaussian_loglik(step.sampled_g, table.g, sigma)
    return log_l, table, cache


def freeze_targets(model: ScoringModel, critic: CriticParams, chunks,
                   cfg: A2CConfig) -> FrozenTargets:
    """Evaluate R, A and ir at the current parameters and detach them."""
    returns, advantages, ratios = [], [], []
    for chunk in chunks:
        R = nstep_returns(chunk, cfg.gamma, critic)
        A = [r - critic_value(critic, step.obs.entities)
             for r, step in zip(R, chunk.steps)]
        ir = []
        for step in chunk.steps:
            log_l, _, _ = _step_logliks(model, step, cfg.sigma)
            delta = np.clip(log_l - step.log_l_old, -LOG_RATIO_CLIP, LOG_RATIO_CLIP)
            ir.append(float(np.exp(delta)))
        returns.append(R)
        advantages.append(A)
        ratios.append(ir)
    return FrozenTargets(returns, advantages, ratios)


def frozen_objective(model: ScoringModel, critic: CriticParams, chunks,
                     cfg: A2CConfig, frozen: FrozenTargets) -> float:
    """The descended loss with R, A, ir held at the frozen values."""
    total = 0.0
    count = 0
    for chunk, R, A, ir in zip(chunks, frozen.returns, frozen.advantages,
                               frozen.ratios):
        for step, r, a, w in zip(chunk.steps, R, A, ir):
            v = critic_value(critic, step.obs.entities)
            log_l, _, _ = _step_logliks(model, step, cfg.sigma)
            total += abs(r - v) - cfg.lam * w * a * log_l
            count += 1
    return total / count


@dataclass
class UpdateDiagnostics:
    value_loss: float
    policy_loss: float
    mean_ir: float
    grad_norm: float
    steps: int
    skipped: bool = False


def a2c_grads(model: ScoringModel, critic: CriticParams, chunks,
              cfg: A2CConfig, frozen: FrozenTargets | None = None):
    """Analytic gradients of the batch loss (means over steps).

    Returns (grads, diagnostics) with grads = {"h", "g", "embed", "head"};
    "g" is None when the model has no g_net. When `frozen` is omitted the
    targets are evaluated at the current parameters, which is the on-line
    update; passing explicit targets reproduces `frozen_objective`.
    """
    if frozen is None:
        frozen = freeze_targets(model, critic, chunks, cfg)
    h_acc = zero_grads(model.h_net)
    g_acc = zero_grads(model.g_net) if model.g_net is not None else None
    embed_acc = zero_grads(critic.embed_net)
    head_acc = zero_grads(critic.head_net)
    value_loss = 0.0
    policy_loss = 0.0
    ir_sum = 0.0
    count = 0
    for chunk, R, A, ir in zip(chunks, frozen.returns, frozen.advantages,
                               frozen.ratios):
        for step, r, a, w in zip(chunk.steps, R, A, ir):
            v, v_cache = critic_value(critic, step.obs.entities, with_cache=True)
            value_loss += abs(r - v)
            eg, hg = critic_backward(critic, v_cache, upstream=-np.sign(r - v))
            add_grads(embed_acc, eg)
            add_grads(head_acc, hg)

            log_l, table, cache = _step_logliks(model, step, cfg.sigma,
                                                with_cache=True)
            policy_loss += -cfg.lam * w * a * log_l
            ir_sum += w
            scale = -cfg.lam * w * a / cfg.sigma
            dH = scale * (step.sampled_h - table.h)
            dG = None
            if step.sampled_g is not None:
                dG = scale * (step.sampled_g - table.g)
            hg_grads, gg_grads = score_pairs_backward(model, cache, dH, dG)
            add_grads(h_acc, hg_grads)
            if gg_grads is not None:
                add_grads(g_acc, gg_grads)
            count += 1
    for acc in (h_acc, g_acc, embed_acc, head_acc):
        if acc is None:
            continue
        for gW, gb in acc:
            gW /= count
            gb /= count
    grads = {"h": h_acc, "g": g_acc, "embed": embed_acc, "head": head_acc}
    norm_sq = sum(float(np.sum(grads_to_vector(acc) ** 2))
                  for acc in grads.values() if acc is not None)
    diag = UpdateDiagnostics(
        value_loss=value_loss / count,
        policy_loss=policy_loss / count,
        mean_ir=ir_sum / count,
        grad_norm=float(np.sqrt(norm_sq)),
        steps=count,
    )
    return grads, diag


def a2c_update(model: ScoringModel, critic: CriticParams, chunks,
               cfg: A2CConfig, policy_opt, value_opt) -> UpdateDiagnostics:
    """One gradient step on model and critic from a batch of chunks.

    Updates are skipped (parameters untouched) if any gradient entry is
    non-finite, which keeps a single degenerate rollout from destroying
    the run.
    """
    if not chunks:
        raise LearnError("a2c_update needs at least one chunk")
    grads, diag = a2c_grads(model, critic, chunks, cfg)
    for acc in grads.values():
        if acc is None:
            continue
        if not np.all(np.isfinite(grads_to_vector(acc))):
            diag.skipped = True
            return diag
    policy_nets = [model.h_net] + ([model.g_net] if model.g_net is not None else [])
    policy_grads = [grads["h"]] + ([grads["g"]] if grads["g"] is not None else [])
    policy_opt.step(policy_nets, policy_grads)
    value_opt.step([critic.embed_net, critic.head_net],
                   [grads["embed"], grads["head"]])
    return diag
