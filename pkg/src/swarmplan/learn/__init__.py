from .config import OPTIMIZERS, A2CConfig, LearnError
from .noise import NOISE_MODES, NoiseWindows, sample_correlated
from .rollout import (
    BattleMetaEnv,
    Chunk,
    Observation,
    RescueMetaEnv,
    RolloutWorker,
    StepRecord,
    gaussian_loglik,
    worker_rollout,
)
from .train import (
    METRIC_FIELDS,
    THREADS_ENV,
    TrainResult,
    effective_workers,
    evaluate_policy,
    play_episode,
    train,
    write_metrics,
)
from .update import (
    AdamOptimizer,
    FrozenTargets,
    SgdOptimizer,
    UpdateDiagnostics,
    a2c_grads,
    a2c_update,
    freeze_targets,
    frozen_objective,
    make_optimizer,
    nstep_returns,
)

__all__ = [
    "METRIC_FIELDS",
    "NOISE_MODES",
    "OPTIMIZERS",
    "THREADS_ENV",
    "A2CConfig",
    "AdamOptimizer",
    "BattleMetaEnv",
    "Chunk",
    "FrozenTargets",
    "LearnError",
    "NoiseWindows",
    "Observation",
    "RescueMetaEnv",
    "RolloutWorker",
    "SgdOptimizer",
    "StepRecord",
    "TrainResult",
    "UpdateDiagnostics",
    "a2c_grads",
    "a2c_update",
    "effective_workers",
    "evaluate_policy",
    "freeze_targets",
    "frozen_objective",
    "gaussian_loglik",
    "make_optimizer",
    "nstep_returns",
    "play_episode",
    "sample_correlated",
    "train",
    "worker_rollout",
    "write_metrics",
]
