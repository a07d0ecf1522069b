from .config import (
    ENVIRONMENTS,
    INFERENCES,
    SCHEMA_VERSION,
    ExperimentConfig,
    HarnessError,
    SweepSpec,
    load_experiment,
    load_sweep,
    parse_rescue_size,
    save_experiment,
)
from .evaluate import (
    BATTLE_EVAL_SEED_BASE,
    RESCUE_EVAL_SEED_BASE,
    RESCUE_EVAL_SEEDS,
    RESCUE_REFERENCE_POLICIES,
    EvalSummary,
    evaluate,
    evaluate_battle_heuristic,
    evaluate_battle_model,
    evaluate_rescue_model,
    evaluate_rescue_reference,
    oracle_report,
)
from .sweep import (
    SWEEP_FIELDS,
    code_version,
    generalization_sweep,
    hyperparameter_search,
    improvement,
    make_battle_setup,
    make_rescue_setup,
    run_experiment,
    sample_config,
)

__all__ = [
    "BATTLE_EVAL_SEED_BASE",
    "ENVIRONMENTS",
    "INFERENCES",
    "RESCUE_EVAL_SEEDS",
    "RESCUE_EVAL_SEED_BASE",
    "RESCUE_REFERENCE_POLICIES",
    "SCHEMA_VERSION",
    "SWEEP_FIELDS",
    "EvalSummary",
    "ExperimentConfig",
    "HarnessError",
    "SweepSpec",
    "code_version",
    "evaluate",
    "evaluate_battle_heuristic",
    "evaluate_battle_model",
    "evaluate_rescue_model",
    "evaluate_rescue_reference",
    "generalization_sweep",
    "hyperparameter_search",
    "improvement",
    "load_experiment",
    "load_sweep",
    "make_battle_setup",
    "make_rescue_setup",
    "oracle_report",
    "parse_rescue_size",
    "run_experiment",
    "sample_config",
    "save_experiment",
]
