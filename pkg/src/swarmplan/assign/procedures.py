"""Named inference procedures: score tables + constraints -> assignment."""
from __future__ import annotations

from .core import (
    amax_assign,
    greedy_round,
    lp_relax_solve,
    quad_relax_solve,
    round_quad,
)
from .types import Assignment, ConstraintSet, ScoreTable


def infer_amax(scores: ScoreTable, cons: ConstraintSet) -> Assignment:
    return amax_assign(scores)


def infer_lp(scores: ScoreTable, cons: ConstraintSet) -> Assignment:
    return greedy_round(lp_relax_solve(scores, cons), scores, cons)


def infer_quad(scores: ScoreTable, cons: ConstraintSet) -> Assignment:
    if scores.g is None:  # no quadratic term: identical to the LP procedure
        return infer_lp(scores, cons)
    return round_quad(quad_relax_solve(scores, cons), scores, cons)


INFERENCE_PROCEDURES = {
    "amax": infer_amax,
    "lp": infer_lp,
    "quad": infer_quad,
}


def get_procedure(name: str):
    try:
        return INFERENCE_PROCEDURES[name]
    except KeyError:
        raise ValueError(
            f"unknown inference procedure {name!r}; "
            f"expected one of {sorted(INFERENCE_PROCEDURES)}"
        ) from None
