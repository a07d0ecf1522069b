#!/usr/bin/env python3
"""Wall-clock latency of the quadratic inference procedure at battle scale.

Spawns the 80v82 scenario, scores all pairs with a randomly initialized
model (g net included) and times score + FW solve + rounding end to end.
"""
import argparse
import time

import numpy as np

from swarmplan.assign import get_procedure
from swarmplan.battle import (
    build_battle_constraints,
    extract_battle_features,
    load_scenario,
    spawn_battle,
)
from swarmplan.nets import init_scoring_model, score_pairs


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--scenario", default="m80v82")
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()
    state = spawn_battle(load_scenario(args.scenario, seed=0))
    agents, tasks, extras = extract_battle_features(state)
    cons = build_battle_constraints(state)
    model = init_scoring_model(agents.shape[1], tasks.shape[1],
                               pair_extra_dim=extras.shape[-1], with_g=True,
                               seed=0)
    infer = get_procedure("quad")
    times = []
    for _ in range(args.repeats):
        start = time.perf_counter()
        table = score_pairs(model, agents, tasks, pair_extras=extras)
        infer(table, cons)
        times.append(time.perf_counter() - start)
    times_ms = np.array(times) * 1000.0
    print(f"n={agents.shape[0]} m={tasks.shape[0]} quad inference: "
          f"median {np.median(times_ms):.1f} ms, max {times_ms.max():.1f} ms "
          f"over {args.repeats} runs")


if __name__ == "__main__":
    main()
