#!/usr/bin/env python3
"""Train LP-DM on rescue 2x4 and run the zero-shot generalization sweep.

Saves a run directory (config, checkpoint, metrics CSV, version string)
and a Table-1-shaped generalization CSV over 2x4 / 5x10 / 8x15.
"""
import argparse
from pathlib import Path

from swarmplan.harness import (
    RESCUE_EVAL_SEEDS,
    ExperimentConfig,
    generalization_sweep,
    run_experiment,
)
from swarmplan.learn import A2CConfig


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--updates", type=int, default=3000)
    parser.add_argument("--episodes", type=int, default=1000)
    parser.add_argument("--out", default="runs/rescue_2x4_lp")
    parser.add_argument("--inference", default="lp", choices=("amax", "lp", "quad"))
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    a2c = A2CConfig(gamma=0.99, sigma=0.3, p=3, n_steps=4, lam=1.0,
                    lr_policy=1e-2, lr_value=1e-2, optimizer="adam",
                    workers=8, batch_chunks=16)
    config = ExperimentConfig(
        environment="rescue", scenario="2x4", inference=args.inference,
        a2c=a2c, eval_seeds=RESCUE_EVAL_SEEDS[: args.episodes],
        output_dir=args.out, total_updates=args.updates, seed=args.seed,
        eval_every=max(args.updates // 10, 1))
    result, summary = run_experiment(config)
    print(f"trained: eval mean {summary.mean:.3f} +/- {summary.stderr:.3f} "
          f"({summary.failures} failures)")

    rows = generalization_sweep(
        result.model, "rescue", ["2x4", "5x10", "8x15"],
        RESCUE_EVAL_SEEDS[: args.episodes], inference=args.inference, a2c=a2c,
        csv_path=Path(args.out) / "generalization.csv")
    for row in rows:
        print(f"{row['scenario']}: baseline {row['baseline_mean']:.2f} "
              f"method {row['method_mean']:.2f} delta {row['delta_percent']:.1f}%")


if __name__ == "__main__":
    main()
