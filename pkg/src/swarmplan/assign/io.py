"""JSON debug-dump format for assignment instances, used by golden tests."""
from __future__ import annotations

import json

import numpy as np

from .types import ConstraintSet, RelaxedAssignment, ScoreTable

DUMP_VERSION = 1


def dump_instance(scores: ScoreTable, cons: ConstraintSet,
                  relaxed: RelaxedAssignment | None = None) -> str:
    doc = {
        "version": DUMP_VERSION,
        "h": scores.h.tolist(),
        "g": scores.g.tolist() if scores.g is not None else None,
        "mu": cons.mu.tolist(),
        "u": cons.u.tolist(),
        "beta": relaxed.beta.tolist() if relaxed is not None else None,
    }
    return json.dumps(doc)


def load_instance(text: str):
    doc = json.loads(text)
    if doc.get("version") != DUMP_VERSION:
        raise ValueError(f"unsupported dump version: {doc.get('version')}")
    scores = ScoreTable(np.array(doc["h"]),
                        np.array(doc["g"]) if doc["g"] is not None else None)
    cons = ConstraintSet(np.array(doc["mu"]), np.array(doc["u"]))
    relaxed = RelaxedAssignment(np.array(doc["beta"])) if doc["beta"] is not None else None
    return scores, cons, relaxed
