"""Command line entry point.

    aoicache train       --config paper_iv --seed 0 --out results/
    aoicache evaluate    --config desk --qtable results/qtable.bin --out results/
    aoicache sweep       --config fig3_desk --betas 1,2,3,4,5,6,7 --out results/
    aoicache convergence --config paper_iv --grid 1e6,1e7,5e7,1e8 --out results/
    aoicache replay      --config desk --policy zero_wait --slots 50 --out results/

``--config`` takes a YAML file or the name of a built-in scenario. Every
output is a pure function of (config, seed), so repeated invocations write
byte-identical files.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from aoicache.config import ScenarioConfig, dump_config, resolve_config
from aoicache.environment import write_trace
from aoicache.harness import (convergence_study, evaluate_runs, simulate, summarize,
                              summary_columns, sweep_beta1, write_csv)
from aoicache.learner import train
from aoicache.policies import is_learned, parse_policy
from aoicache.qtable import QTable

log = logging.getLogger("aoicache")


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _ints(text: str) -> list[int]:
    return [int(float(x)) for x in text.split(",") if x.strip()]


def _prepare(args) -> tuple[ScenarioConfig, Path]:
    config = resolve_config(args.config)
    if args.seed is not None:
        config = config.replace(seed=args.seed)
    out = Path(args.out if args.out is not None else config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    dump_config(config, out / "config.yaml")
    derived = config.log_derived()
    (out / "derived.json").write_text(json.dumps(derived, indent=2, sort_keys=True) + "\n")
    return config, out


def _trained_table(config: ScenarioConfig, args, out: Path) -> QTable:
    if getattr(args, "qtable", None):
        return QTable.load(args.qtable, config)
    table = train(config, config.seed)
    table.save(out / "qtable.bin")
    return table


def cmd_train(args) -> int:
    config, out = _prepare(args)
    path = out / "qtable.bin"
    resume = None
    if args.resume:
        resume = QTable.load(path, config)
        log.info("resuming from iteration %d", resume.iteration)
    with open(out / "progress.csv", "a" if resume else "w", newline="") as fh:
        writer = csv.writer(fh)
        if resume is None:
            writer.writerow(["iteration", "epsilon", "mean_reward", "probe_discounted_return"])

        def progress(row):
            writer.writerow([row.iteration, repr(row.epsilon), repr(row.mean_reward),
                             repr(row.probe_return)])
            log.info("iteration %d eps %.4f mean reward %.3f", row.iteration, row.epsilon,
                     row.mean_reward)

        train(config, config.seed, resume=resume, progress=progress, checkpoint_path=path)
    return 0


def cmd_evaluate(args) -> int:
    config, out = _prepare(args)
    names = args.policy or list(config.policies)
    table = _trained_table(config, args, out) if any(is_learned(n) for n in names) else None
    rows = []
    for name in names:
        policy = parse_policy(name, table)
        rows.append({"policy": policy.label, **summarize(evaluate_runs(policy, config, config.seed))})
    write_csv(rows, out / "evaluate.csv", ["policy"] + summary_columns())
    return 0


def cmd_sweep(args) -> int:
    config, out = _prepare(args)
    rows = sweep_beta1(config, _floats(args.betas), args.policy or None, config.seed,
                       args.mode)
    write_csv(rows, out / "sweep.csv", ["beta1", "policy", "mode"] + summary_columns())
    return 0


def cmd_convergence(args) -> int:
    config, out = _prepare(args)
    rows = convergence_study(config, _ints(args.grid), config.seed)
    write_csv(rows, out / "convergence.csv", ["t_max"] + summary_columns())
    return 0


def cmd_replay(args) -> int:
    config, out = _prepare(args)
    table = _trained_table(config, args, out) if is_learned(args.policy) else None
    policy = parse_policy(args.policy, table)
    outcomes = simulate(policy, config, config.seed, run=args.run, slots=args.slots)
    write_trace(outcomes, out / "trace.csv", config.n_users)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="aoicache", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("--config", required=True, help="YAML file or built-in scenario name")
        p.add_argument("--seed", type=int, default=None, help="overrides the config seed")
        p.add_argument("--out", default=None, help="output directory (default: config output_dir)")
        p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
        p.set_defaults(func=func)
        return p

    p = add("train", cmd_train, "train a Q-table with EAU")
    p.add_argument("--resume", action="store_true", help="continue from <out>/qtable.bin")

    p = add("evaluate", cmd_evaluate, "evaluate policies over eval_runs seeds")
    p.add_argument("--policy", action="append", help="policy name; repeatable")
    p.add_argument("--qtable", help="trained table for the eau policy (trained if omitted)")

    p = add("sweep", cmd_sweep, "sweep beta1 and compare policies")
    p.add_argument("--betas", default="1,2,3,4,5,6,7")
    p.add_argument("--policy", action="append", help="policy name; repeatable")
    p.add_argument("--mode", choices=["single_table", "retrain"], default=None)

    p = add("convergence", cmd_convergence, "train at several T_max and evaluate")
    p.add_argument("--grid", default="1e6,1e7,5e7,1e8")

    p = add("replay", cmd_replay, "dump a per-slot trace of one run")
    p.add_argument("--policy", default="zero_wait")
    p.add_argument("--qtable")
    p.add_argument("--slots", type=int, default=None)
    p.add_argument("--run", type=int, default=0)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
