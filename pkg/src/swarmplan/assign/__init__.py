from .core import (
    amax_assign,
    brute_force_assign,
    feasible,
    fw_line_search,
    fw_linear_oracle,
    greedy_round,
    lp_relax_solve,
    objective_value,
    polish_assignment,
    quad_relax_solve,
    round_quad,
)
from .io import dump_instance, load_instance
from .procedures import INFERENCE_PROCEDURES, get_procedure
from .simplex import simplex_maximize
from .types import (
    UNASSIGNED,
    AssignError,
    Assignment,
    ConstraintSet,
    FwConfig,
    RelaxedAssignment,
    ScoreTable,
    SolverFailure,
)

__all__ = [
    "INFERENCE_PROCEDURES",
    "UNASSIGNED",
    "AssignError",
    "Assignment",
    "ConstraintSet",
    "FwConfig",
    "RelaxedAssignment",
    "ScoreTable",
    "SolverFailure",
    "amax_assign",
    "brute_force_assign",
    "dump_instance",
    "feasible",
    "fw_line_search",
    "fw_linear_oracle",
    "get_procedure",
    "greedy_round",
    "load_instance",
    "lp_relax_solve",
    "objective_value",
    "polish_assignment",
    "quad_relax_solve",
    "round_quad",
    "simplex_maximize",
]
