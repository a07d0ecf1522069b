#!/usr/bin/env python3
"""Reproduce the reference-policy episode-length table on the shipped seeds.

Runs the closest-victim baseline on rescue 2x4 / 5x10 / 8x15 and the exact
routing topline on 2x4 / 5x10, 1000 episodes each, and prints a CSV.
"""
import argparse
import csv
import sys
import time

from swarmplan.harness import RESCUE_EVAL_SEEDS, evaluate_rescue_reference

ROWS = [
    ("closest", 2, 4),
    ("closest", 5, 10),
    ("closest", 8, 15),
    ("topline", 2, 4),
    ("topline", 5, 10),
]


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--episodes", type=int, default=1000)
    parser.add_argument("--out", default="-")
    args = parser.parse_args()
    seeds = RESCUE_EVAL_SEEDS[: args.episodes]
    out = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    writer = csv.writer(out)
    writer.writerow(["policy", "scenario", "mean_length", "stderr",
                     "failures", "seconds"])
    for kind, n, m in ROWS:
        start = time.perf_counter()
        summary = evaluate_rescue_reference(kind, n, m, seeds)
        writer.writerow([kind, f"{n}x{m}", f"{summary.mean:.3f}",
                         f"{summary.stderr:.3f}", summary.failures,
                         f"{time.perf_counter() - start:.1f}"])
        out.flush()
    if out is not sys.stdout:
        out.close()


if __name__ == "__main__":
    main()
