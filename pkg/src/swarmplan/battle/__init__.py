from .features import BASE_FEATURES, extract_battle_features, feature_dim
from .heuristics import (
    HEURISTICS,
    closest_heuristic,
    heuristic_policy,
    random_no_change,
    weakest_closest,
    weakest_closest_no_overkill,
    weakest_closest_no_overkill_no_change,
    weakest_closest_no_overkill_smart,
)
from .sim import (
    ARENA,
    FRAME_CAP,
    BattleConfig,
    BattleError,
    BattleState,
    Unit,
    UnitSpec,
    build_battle_constraints,
    dump_replay,
    frame_record,
    load_scenario,
    spawn_battle,
    step_battle,
)

__all__ = [
    "ARENA",
    "BASE_FEATURES",
    "FRAME_CAP",
    "HEURISTICS",
    "BattleConfig",
    "BattleError",
    "BattleState",
    "Unit",
    "UnitSpec",
    "build_battle_constraints",
    "closest_heuristic",
    "dump_replay",
    "extract_battle_features",
    "feature_dim",
    "frame_record",
    "heuristic_policy",
    "load_scenario",
    "random_no_change",
    "spawn_battle",
    "step_battle",
    "weakest_closest",
    "weakest_closest_no_overkill",
    "weakest_closest_no_overkill_no_change",
    "weakest_closest_no_overkill_smart",
]
