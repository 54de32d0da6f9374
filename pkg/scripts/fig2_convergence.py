#!/usr/bin/env python3
"""Reward of the learned greedy policy against the training length T_max.

    python scripts/fig2_convergence.py --config paper_iv --grid 1e6,1e7,5e7,1e8
"""

import argparse
import logging
from pathlib import Path

from aoicache.config import resolve_config
from aoicache.harness import convergence_study, summary_columns, write_csv


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--config", default="paper_iv")
    parser.add_argument("--grid", default="1e6,1e7,5e7,1e8")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--out", default="results/fig2")
    args = parser.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s")

    config = resolve_config(args.config)
    grid = [int(float(x)) for x in args.grid.split(",")]
    rows = convergence_study(config, grid, args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_csv(rows, out / "convergence.csv", ["t_max"] + summary_columns())
    for r in rows:
        print(f"T_max={r['t_max']:>11,d}  reward {r['mean_discounted_reward']:9.1f}"
              f" +- {r['ci95_discounted_reward']:.1f} (95% CI)")


if __name__ == "__main__":
    main()
