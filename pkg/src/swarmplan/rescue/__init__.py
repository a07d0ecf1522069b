from .env import (
    GRID_SIZE,
    STEP_REWARD,
    GridState,
    RescueConfig,
    RescueEnv,
    RescueError,
    build_constraints,
    chebyshev,
    extract_features,
    low_level_move,
    run_episode,
    spawn,
    step,
)
from .oracles import (
    RoutePlan,
    SubsetPathTable,
    closest_baseline,
    dp_subset_paths,
    mvr_exact,
    plan_policy,
)

__all__ = [
    "GRID_SIZE",
    "STEP_REWARD",
    "GridState",
    "RescueConfig",
    "RescueEnv",
    "RescueError",
    "RoutePlan",
    "SubsetPathTable",
    "build_constraints",
    "chebyshev",
    "closest_baseline",
    "dp_subset_paths",
    "extract_features",
    "low_level_move",
    "mvr_exact",
    "plan_policy",
    "run_episode",
    "spawn",
    "step",
]
