"""Experiment and sweep configuration with a versioned JSON schema.

Schema (version 1)::

    {"version": 1,
     "experiment": {
        "environment": "rescue" | "battle",
        "scenario": "2x4" | battle scenario name,
        "inference": "amax" | "lp" | "quad",
        "a2c": {... A2CConfig fields ...},
        "eval_seeds": [int, ...],
        "output_dir": "runs/...",
        "total_updates": int, "seed": int, "eval_every": int}}

Sweep files carry the same envelope with a "sweep" object instead of
(or alongside) "experiment".
"""
from __future__ import annotations

import dataclasses
import json
import re
from dataclasses import dataclass, field

from ..learn import OPTIMIZERS, A2CConfig

SCHEMA_VERSION = 1
ENVIRONMENTS = ("rescue", "battle")
INFERENCES = ("amax", "lp", "quad")

_RESCUE_SIZE = re.compile(r"^(\d+)x(\d+)$")


class HarnessError(ValueError):
    pass


def parse_rescue_size(scenario: str):
    """\"2x4\" -> (2, 4)."""
    match = _RESCUE_SIZE.match(scenario)
    if not match:
        raise HarnessError(f"rescue scenario must look like '2x4', got {scenario!r}")
    n, m = int(match.group(1)), int(match.group(2))
    if n < 1 or m < 1:
        raise HarnessError("rescue sizes must be positive")
    return n, m


@dataclass
class ExperimentConfig:
    environment: str
    scenario: str
    inference: str
    a2c: A2CConfig = field(default_factory=A2CConfig)
    eval_seeds: tuple = ()
    output_dir: str = "runs/experiment"
    total_updates: int = 0
    seed: int = 0
    eval_every: int = 0

    def __post_init__(self):
        if self.environment not in ENVIRONMENTS:
            raise HarnessError(f"environment must be one of {ENVIRONMENTS}")
        if self.inference not in INFERENCES:
            raise HarnessError(f"inference must be one of {INFERENCES}")
        if self.environment == "rescue":
            parse_rescue_size(self.scenario)
        self.eval_seeds = tuple(int(s) for s in self.eval_seeds)
        if not self.eval_seeds:
            raise HarnessError("eval_seeds must be nonempty")
        if self.total_updates < 0 or self.eval_every < 0:
            raise HarnessError("budgets must be >= 0")

    def to_dict(self) -> dict:
        out = dataclasses.asdict(self)
        out["eval_seeds"] = list(self.eval_seeds)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        data = dict(data)
        a2c = data.pop("a2c", {})
        if isinstance(a2c, dict):
            a2c = A2CConfig(**a2c)
        return cls(a2c=a2c, **data)


@dataclass
class SweepSpec:
    """Random-search laws over the tunable A2CConfig fields.

    Learning rates are 10^-c with c uniform on [lr_exp_low, lr_exp_high];
    lambda is 10^c with c uniform on lam_exp; sigma is uniform on
    [sigma_low, sigma_high] (the high end depends on the environment);
    p and n_steps are uniform integers; the optimizer is drawn uniformly.
    """

    samples: int = 8
    seed: int = 0
    budget_updates: int = 50
    lr_exp_low: float = 0.0
    lr_exp_high: float = 5.0
    sigma_low: float = 0.1
    sigma_high: float = 2.0
    lam_exp_low: float = -3.0
    lam_exp_high: float = 3.0
    p_low: int = 1
    p_high: int = 10
    n_steps_low: int = 2
    n_steps_high: int = 10
    optimizers: tuple = OPTIMIZERS

    def __post_init__(self):
        if self.samples < 1 or self.budget_updates < 0:
            raise HarnessError("samples must be >= 1 and budget_updates >= 0")
        if not (0 < self.sigma_low <= self.sigma_high):
            raise HarnessError("need 0 < sigma_low <= sigma_high")
        if not (1 <= self.p_low <= self.p_high):
            raise HarnessError("need 1 <= p_low <= p_high")
        if not (2 <= self.n_steps_low <= self.n_steps_high):
            raise HarnessError("need 2 <= n_steps_low <= n_steps_high")
        self.optimizers = tuple(self.optimizers)
        for name in self.optimizers:
            if name not in OPTIMIZERS:
                raise HarnessError(f"unknown optimizer {name!r}")

    def to_dict(self) -> dict:
        out = dataclasses.asdict(self)
        out["optimizers"] = list(self.optimizers)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "SweepSpec":
        return cls(**data)

    @classmethod
    def for_environment(cls, environment: str, **kw) -> "SweepSpec":
        """Documented defaults: sigma high is 2 for rescue, 3 for battle."""
        kw.setdefault("sigma_high", 3.0 if environment == "battle" else 2.0)
        return cls(**kw)


def _load_envelope(path) -> dict:
    with open(path) as fh:
        data = json.load(fh)
    version = data.get("version")
    if version != SCHEMA_VERSION:
        raise HarnessError(f"unsupported config version {version!r}")
    return data


def load_experiment(path) -> ExperimentConfig:
    data = _load_envelope(path)
    if "experiment" not in data:
        raise HarnessError("config file has no 'experiment' object")
    return ExperimentConfig.from_dict(data["experiment"])


def save_experiment(path, config: ExperimentConfig):
    with open(path, "w") as fh:
        json.dump({"version": SCHEMA_VERSION, "experiment": config.to_dict()},
                  fh, indent=2)
        fh.write("\n")


def load_sweep(path):
    """Returns (SweepSpec, base ExperimentConfig)."""
    data = _load_envelope(path)
    if "sweep" not in data or "experiment" not in data:
        raise HarnessError("sweep file needs 'sweep' and 'experiment' objects")
    return SweepSpec.from_dict(data["sweep"]), ExperimentConfig.from_dict(data["experiment"])
