#!/usr/bin/env python3
"""beta1 sweep of EAU against zero-wait (reward, discounted AoI and energy).

    python scripts/fig3_fig4_sweep.py --config fig3_desk --out results/fig3

Writes sweep.csv and prints the EAU - zero_wait reward gap per beta1.
"""

import argparse
import logging
from pathlib import Path

from aoicache.config import resolve_config
from aoicache.harness import summary_columns, sweep_beta1, write_csv


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--config", default="fig3_desk")
    parser.add_argument("--betas", default="1,2,3,4,5,6,7")
    parser.add_argument("--mode", choices=["single_table", "retrain"], default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--out", default="results/fig3")
    args = parser.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s")

    config = resolve_config(args.config)
    betas = [float(b) for b in args.betas.split(",")]
    rows = sweep_beta1(config, betas, ["eau", "zero_wait"], args.seed, args.mode)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_csv(rows, out / "sweep.csv", ["beta1", "policy", "mode"] + summary_columns())

    by_beta = {}
    for r in rows:
        by_beta.setdefault(r["beta1"], {})[r["policy"]] = r
    print(f"{'beta1':>6} {'EAU':>10} {'zero-wait':>10} {'gap':>8} {'EAU AoI':>9} {'EAU E':>8}")
    for beta1, cell in by_beta.items():
        e, z = cell["eau"], cell["zero_wait"]
        print(f"{beta1:6.1f} {e['mean_discounted_reward']:10.1f} {z['mean_discounted_reward']:10.1f}"
              f" {e['mean_discounted_reward'] - z['mean_discounted_reward']:8.1f}"
              f" {e['mean_discounted_aoi_s']:9.1f} {e['mean_discounted_energy_mJ']:8.1f}")


if __name__ == "__main__":
    main()
