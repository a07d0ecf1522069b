from .checkpoint import (
    CheckpointError,
    load_arrays,
    load_models,
    save_arrays,
    save_models,
)
from .critic import CriticParams, critic_backward, critic_value, init_critic
from .mlp import (
    HIDDEN,
    MlpParams,
    NetError,
    add_grads,
    grads_to_vector,
    init_mlp,
    mlp_backward,
    mlp_backward_batch,
    mlp_forward,
    mlp_forward_batch,
    params_to_vector,
    vector_to_params,
    zero_grads,
)
from .scoring import ScoringModel, init_scoring_model, score_pairs, score_pairs_backward

__all__ = [
    "HIDDEN",
    "CheckpointError",
    "CriticParams",
    "MlpParams",
    "NetError",
    "ScoringModel",
    "add_grads",
    "critic_backward",
    "critic_value",
    "grads_to_vector",
    "init_critic",
    "init_mlp",
    "init_scoring_model",
    "load_arrays",
    "load_models",
    "mlp_backward",
    "mlp_backward_batch",
    "mlp_forward",
    "mlp_forward_batch",
    "params_to_vector",
    "save_arrays",
    "save_models",
    "score_pairs",
    "score_pairs_backward",
    "vector_to_params",
    "zero_grads",
]
