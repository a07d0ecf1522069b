"""Generalization sweeps and hyperparameter random search."""
from __future__ import annotations

import csv
import dataclasses
import json
import subprocess
import traceback
from pathlib import Path

import numpy as np

from ..learn import A2CConfig, RescueMetaEnv, train
from ..nets import init_critic, init_scoring_model, save_models
from ..rescue import RescueConfig
from .config import ExperimentConfig, HarnessError, SweepSpec, parse_rescue_size, save_experiment
from .evaluate import evaluate, evaluate_battle_heuristic, evaluate_rescue_reference

SWEEP_FIELDS = ("scenario", "baseline_mean", "method_mean", "delta_percent",
                "method_stderr", "failures", "episodes")


def improvement(baseline_mean: float, method_mean: float) -> float:
    """Percent improvement over baseline: 100 * (baseline - method) / baseline."""
    if baseline_mean == 0.0:
        raise HarnessError("baseline mean is zero; improvement undefined")
    return 100.0 * (baseline_mean - method_mean) / baseline_mean


def generalization_sweep(policy, environment: str, test_scenarios, eval_seeds,
                         inference: str = "lp", a2c: A2CConfig | None = None,
                         csv_path=None):
    """Evaluate the SAME parameters on every test scenario, zero-shot.

    `policy` is a ScoringModel or a reference-policy name. Each row also
    carries the closest-baseline mean and the percent improvement over
    it. Feature-schema mismatches between the checkpoint and a scenario
    raise rather than coerce.
    """
    rows = []
    for scenario in test_scenarios:
        if environment == "rescue":
            n, m = parse_rescue_size(scenario)
            baseline = evaluate_rescue_reference("closest", n, m, eval_seeds)
        else:
            baseline = evaluate_battle_heuristic(
                "c", scenario, len(tuple(eval_seeds)), min(eval_seeds))
        summary = evaluate(policy, environment, scenario, eval_seeds,
                           inference, a2c)
        rows.append({
            "scenario": scenario,
            "baseline_mean": baseline.mean,
            "method_mean": summary.mean,
            "delta_percent": improvement(baseline.mean, summary.mean),
            "method_stderr": summary.stderr,
            "failures": summary.failures,
            "episodes": summary.episodes,
        })
    if csv_path is not None:
        with open(csv_path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=SWEEP_FIELDS)
            writer.writeheader()
            writer.writerows(rows)
    return rows


def sample_config(spec: SweepSpec, base: A2CConfig, rng) -> A2CConfig:
    """One random-search draw over the tunable fields of A2CConfig."""
    return dataclasses.replace(
        base,
        lr_policy=float(10.0 ** -rng.uniform(spec.lr_exp_low, spec.lr_exp_high)),
        lr_value=float(10.0 ** -rng.uniform(spec.lr_exp_low, spec.lr_exp_high)),
        sigma=float(rng.uniform(spec.sigma_low, spec.sigma_high)),
        lam=float(10.0 ** rng.uniform(spec.lam_exp_low, spec.lam_exp_high)),
        p=int(rng.integers(spec.p_low, spec.p_high + 1)),
        n_steps=int(rng.integers(spec.n_steps_low, spec.n_steps_high + 1)),
        optimizer=str(rng.choice(spec.optimizers)),
    )


def code_version() -> str:
    try:
        out = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            capture_output=True, text=True, cwd=Path(__file__).parent, timeout=10,
        )
        if out.returncode == 0:
            return out.stdout.strip()
    except OSError:
        pass
    return "unknown"


def make_rescue_setup(config: ExperimentConfig):
    """(env_factory, fresh model, fresh critic) for a rescue experiment."""
    n, m = parse_rescue_size(config.scenario)
    env_factory = lambda: RescueMetaEnv(RescueConfig(n, m, seed=config.seed))
    probe = env_factory().reset(seed=0)
    model = init_scoring_model(
        probe.agent_feats.shape[1], probe.task_feats.shape[1],
        with_g=config.inference == "quad", seed=config.seed)
    critic = init_critic(2, probe.task_feats.shape[1], seed=config.seed + 1)
    return env_factory, model, critic


def make_battle_setup(config: ExperimentConfig):
    from ..battle import load_scenario
    from ..learn import BattleMetaEnv
    env_factory = lambda: BattleMetaEnv(load_scenario(config.scenario,
                                                      seed=config.seed))
    probe_env = env_factory()
    probe = probe_env.reset(seed=0)
    model = init_scoring_model(
        probe.agent_feats.shape[1], probe.task_feats.shape[1],
        pair_extra_dim=probe.pair_extras.shape[-1],
        with_g=config.inference == "quad", seed=config.seed)
    critic = init_critic(2, probe_env.feature_dim, seed=config.seed + 1)
    return env_factory, model, critic


def run_experiment(config: ExperimentConfig, total_updates=None, max_seconds=None):
    """Train per the config and persist a complete run directory.

    The directory contains the resolved config, the final checkpoint,
    the metrics CSV and the code version string — everything needed to
    re-run bit-identically with the same seed.
    """
    setup = make_rescue_setup if config.environment == "rescue" else make_battle_setup
    env_factory, model, critic = setup(config)
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    save_experiment(out / "config.json", config)
    (out / "VERSION").write_text(code_version() + "\n")
    budget = config.total_updates if total_updates is None else total_updates
    result = train(
        model, critic, env_factory, config.inference, config.a2c,
        total_updates=budget, seed=config.seed,
        eval_every=config.eval_every, metrics_path=out / "metrics.csv",
        max_seconds=max_seconds,
    )
    save_models(out / "checkpoint.bin", result.model, result.critic)
    summary = evaluate(result.model, config.environment, config.scenario,
                       config.eval_seeds, config.inference, config.a2c)
    (out / "eval.json").write_text(json.dumps(summary.to_dict(), indent=2) + "\n")
    return result, summary


def hyperparameter_search(spec: SweepSpec, base: ExperimentConfig):
    """Random search: sample, train, evaluate, rank.

    Individual run failures are recorded (with the exception text) and
    the sweep continues. Rescue ranks by ascending episode length,
    battle by descending return. Every run directory persists its
    sampled config and metrics.
    """
    rng = np.random.default_rng(spec.seed)
    results = []
    root = Path(base.output_dir)
    for k in range(spec.samples):
        a2c = sample_config(spec, base.a2c, rng)
        run_cfg = dataclasses.replace(
            base, a2c=a2c, output_dir=str(root / f"run_{k:03d}"),
            seed=base.seed + k, total_updates=spec.budget_updates)
        record = {"run": k, "a2c": dataclasses.asdict(a2c)}
        try:
            _, summary = run_experiment(run_cfg)
            record["summary"] = summary.to_dict()
            record["score"] = summary.mean
        except Exception as exc:  # recorded, sweep continues
            record["error"] = f"{type(exc).__name__}: {exc}"
            record["traceback"] = traceback.format_exc()
        results.append(record)
    ascending = base.environment == "rescue"
    ranked = sorted(
        (r for r in results if "score" in r),
        key=lambda r: r["score"] if ascending else -r["score"])
    ranked += [r for r in results if "score" not in r]
    root.mkdir(parents=True, exist_ok=True)
    (root / "sweep_results.json").write_text(
        json.dumps({"spec": spec.to_dict(), "ranked": ranked}, indent=2) + "\n")
    return ranked
