"""Evaluation runs, beta1 sweeps and convergence studies.

Seeding: evaluation run ``k`` under master seed ``s`` always reads the
substream ``(s, EVAL, k)``, so it is identical however many runs execute and
in which order. All policies in a sweep share the evaluation streams (common
random numbers), which tightens policy comparisons.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from aoicache import _kernels, rng as rngmod
from aoicache.config import ScenarioConfig
from aoicache.environment import Environment, SlotOutcome
from aoicache.learner import train
from aoicache.policies import Policy, decide, is_learned, parse_policy
from aoicache.qtable import radix_weights

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunMetrics:
    discounted_return: float
    discounted_cost: float
    discounted_avg_aoi: float  # seconds
    discounted_energy: float  # mJ


def _draws(config: ScenarioConfig, seed: int, run: int, stream: int, horizon: int) -> np.ndarray:
    return rngmod.slot_draws(rngmod.substream(seed, stream, run), horizon, config.n_users)


def evaluate(policy: Policy, config: ScenarioConfig, seed: int, run: int = 0,
             stream: int = rngmod.EVAL) -> RunMetrics:
    """Simulate ``config.horizon`` slots from the all-ones state and discount with ``config.discount``."""
    policy.check_matches(config)
    env = Environment(config)
    draws = _draws(config, seed, run, stream, config.horizon)
    out = _kernels.evaluate_run(
        policy.code, policy.param, _greedy_array(policy), draws, config.n_users, config.m_max,
        radix_weights(config.n_users, config.m_max), env.c1, config.beta1, config.beta2,
        config.update_energy, np.asarray(config.user_weights), config.slot_duration,
        np.asarray(config.request_probs), env.p_fail, config.discount)
    return RunMetrics(*out)


def simulate(policy: Policy, config: ScenarioConfig, seed: int, run: int = 0,
             slots: int | None = None) -> list[SlotOutcome]:
    """Per-slot outcomes of one run through the pure-Python environment."""
    policy.check_matches(config)
    env = Environment(config)
    n = config.horizon if slots is None else slots
    draws = _draws(config, seed, run, rngmod.EVAL, n)
    state = env.reset()
    outcomes = []
    for t in range(n):
        row = draws[t]
        action = decide(policy, state, t, float(row[0]))
        outcome = env.step(state, action, row[1], row[2:])
        outcomes.append(outcome)
        state = outcome.state_after
    return outcomes


def age_trajectory(policy: Policy, config: ScenarioConfig, seed: int, run: int = 0,
                   slots: int | None = None):
    """(ages, actions, successes) of one run; ``ages`` has the initial state in row 0."""
    policy.check_matches(config)
    n = config.horizon if slots is None else slots
    draws = _draws(config, seed, run, rngmod.EVAL, n)
    return _kernels.simulate_ages(
        policy.code, policy.param, _greedy_array(policy), draws, config.n_users, config.m_max,
        radix_weights(config.n_users, config.m_max), np.asarray(config.request_probs),
        config.failure_prob)


def _greedy_array(policy: Policy) -> np.ndarray:
    if policy.table is not None:
        return policy.table.greedy_policy()
    return np.zeros(1, dtype=np.int8)


def metrics_from_outcomes(outcomes: Iterable[SlotOutcome], config: ScenarioConfig) -> RunMetrics:
    env = Environment(config)
    disc = 1.0
    ret = cost = aoi = energy = 0.0
    for o in outcomes:
        a = sum(w * (x * config.slot_duration) for w, x in zip(config.user_weights, o.state_after.users))
        ret += disc * o.reward
        cost += disc * o.cost
        aoi += disc * a
        energy += disc * (o.action * env.cost_params.update_energy)
        disc *= config.discount
    return RunMetrics(ret, cost, aoi, energy)


def evaluate_runs(policy: Policy, config: ScenarioConfig, seed: int,
                  runs: int | None = None) -> list[RunMetrics]:
    n = config.eval_runs if runs is None else runs
    return [evaluate(policy, config, seed, run=k) for k in range(n)]


_FIELDS = (("discounted_reward", "discounted_return"),
           ("discounted_cost", "discounted_cost"),
           ("discounted_aoi_s", "discounted_avg_aoi"),
           ("discounted_energy_mJ", "discounted_energy"))


def summarize(metrics: Sequence[RunMetrics]) -> dict:
    """Mean, sample std and 95% CI half-width of every metric."""
    out = {"runs": len(metrics)}
    for label, attr in _FIELDS:
        values = np.array([getattr(m, attr) for m in metrics], dtype=np.float64)
        if len(values) == 0:
            mean = std = ci = math.nan
        else:
            mean = float(values.mean())
            std = float(values.std(ddof=1)) if len(values) > 1 else 0.0
            ci = 1.96 * std / math.sqrt(len(values))
        out[f"mean_{label}"] = mean
        out[f"std_{label}"] = std
        out[f"ci95_{label}"] = ci
    return out


def summary_columns() -> list[str]:
    cols = ["runs"]
    for label, _ in _FIELDS:
        cols += [f"mean_{label}", f"std_{label}", f"ci95_{label}"]
    return cols


def sweep_beta1(config: ScenarioConfig, betas: Sequence[float],
                policies: Sequence[str] | None = None, seed: int | None = None,
                mode: str | None = None) -> list[dict]:
    """One row per (beta1, policy) with mean/std/CI of every run metric.

    ``single_table`` trains one table per beta1 and evaluates it over
    ``eval_runs`` seeds; ``retrain`` trains a fresh table for every run.
    """
    seed = config.seed if seed is None else seed
    mode = config.sweep_mode if mode is None else mode
    policies = config.policies if policies is None else policies
    rows = []
    for i, beta1 in enumerate(betas):
        cell = config.replace(beta1=float(beta1))
        cell.log_derived()
        for name in policies:
            if is_learned(name):
                metrics = _learned_metrics(cell, seed, i, mode)
                row_mode = mode
            else:
                metrics = evaluate_runs(parse_policy(name), cell, seed)
                row_mode = "fixed"
            rows.append({"beta1": float(beta1), "policy": parse_label(name), "mode": row_mode,
                         **summarize(metrics)})
            log.info("beta1=%s %s: reward %.3f", beta1, name, rows[-1]["mean_discounted_reward"])
    return rows


def parse_label(name: str) -> str:
    return "eau" if is_learned(name) else parse_policy(name).label


def _learned_metrics(cell: ScenarioConfig, seed: int, index: int, mode: str) -> list[RunMetrics]:
    if mode == "single_table":
        table = train(cell, rngmod.derive_seed(seed, rngmod.CELL, index))
        return evaluate_runs(Policy.greedy(table), cell, seed)
    metrics = []
    for k in range(cell.eval_runs):
        table = train(cell, rngmod.derive_seed(seed, rngmod.RETRAIN, index, k))
        metrics.append(evaluate(Policy.greedy(table), cell, seed, run=k))
    return metrics


def convergence_study(config: ScenarioConfig, t_max_grid: Sequence[int],
                      seed: int | None = None) -> list[dict]:
    """Train at each T_max and evaluate the greedy policy of the result."""
    seed = config.seed if seed is None else seed
    rows = []
    for j, t_max in enumerate(t_max_grid):
        cell = config.replace(t_max=int(t_max))
        table = train(cell, rngmod.derive_seed(seed, rngmod.CELL, j))
        summary = summarize(evaluate_runs(Policy.greedy(table), cell, seed))
        rows.append({"t_max": int(t_max), **summary})
        log.info("t_max=%d: reward %.3f +- %.3f", t_max, summary["mean_discounted_reward"],
                 summary["ci95_discounted_reward"])
    return rows


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(rows: Sequence[dict], path, columns: Sequence[str]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(row[c]) for c in columns])
