"""EAU: tabular expected Sarsa with an annealed epsilon-greedy policy.

Epsilon here is the probability of taking the *greedy* action (the other
action gets ``1 - eps``). It grows linearly from ``eps_start`` to ``eps_end``
over ``t_max`` iterations, so exploration fades as training proceeds.

Training follows one continuing trajectory from the all-ones age vector with
a zero table. Randomness comes in fixed blocks of ``BLOCK`` iterations, each
drawn from its own substream, so a run resumed from a checkpoint reproduces
the uninterrupted run bit for bit.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np

from aoicache import _kernels, rng as rngmod
from aoicache.config import ScenarioConfig
from aoicache.environment import Environment, SlotState, reward_constant
from aoicache.qtable import QTable, QTableError, radix_weights

log = logging.getLogger(__name__)

BLOCK = 1 << 16


@dataclass(frozen=True)
class LearnerParams:
    step_size: float
    discount: float
    eps_start: float
    eps_end: float
    t_max: int
    c1: float

    def __post_init__(self):
        if not 0.0 < self.step_size <= 1.0:
            raise ValueError("step_size must lie in (0, 1]")
        if not 0.0 < self.discount < 1.0:
            raise ValueError("discount must lie in (0, 1)")
        if not 0.0 < self.eps_start <= self.eps_end < 1.0:
            raise ValueError("need 0 < eps_start <= eps_end < 1")

    @classmethod
    def from_config(cls, config: ScenarioConfig) -> "LearnerParams":
        return cls(config.step_size, config.discount, config.eps_start, config.eps_end,
                   config.t_max, reward_constant(config))

    def epsilon(self, t: int) -> float:
        return epsilon_at(t, self.eps_start, self.eps_end, self.t_max)


def epsilon_at(t: int, eps_start: float, eps_end: float, t_max: int) -> float:
    """Greedy probability used at iteration ``t`` (0-based)."""
    if t_max == 0:
        return eps_start
    return eps_start + t * (eps_end - eps_start) / t_max


def action_probabilities(q: QTable, state: SlotState, eps: float) -> tuple[float, float]:
    """(P(action 0), P(action 1)) under the epsilon-greedy rule."""
    if q.greedy_action(state) == 1:
        return 1.0 - eps, eps
    return eps, 1.0 - eps


def select_action(q: QTable, state: SlotState, eps: float, u: float | np.random.Generator) -> int:
    """Greedy action with probability ``eps``, the other one otherwise.

    ``u`` is either a Uniform(0,1) draw or a generator to take one from.
    """
    if not isinstance(u, float):
        u = float(u.random())
    greedy = q.greedy_action(state)
    return greedy if u < eps else 1 - greedy


def expected_next_value(q: QTable, next_state: SlotState, eps: float) -> float:
    i = 2 * q.index(next_state)
    greedy = int(q.values[i + 1] > q.values[i])
    return eps * q.values[i + greedy] + (1.0 - eps) * q.values[i + 1 - greedy]


def td_update(q: QTable, s: SlotState, a: int, reward: float, s_next: SlotState,
              params: LearnerParams, eps: float) -> float:
    """Move Q(s, a) toward ``reward + discount * E_eps[Q(s_next, .)]``; returns the new value."""
    expected = expected_next_value(q, s_next, eps)
    i = 2 * q.index(s) + a
    q.values[i] = q.values[i] + params.step_size * (reward + params.discount * expected - q.values[i])
    return float(q.values[i])


def train_reference(config: ScenarioConfig, seed: int, iterations: int | None = None) -> QTable:
    """Pure-Python training loop; slow, used to cross-check :func:`train`."""
    env = Environment(config)
    params = LearnerParams.from_config(config)
    table = QTable.zeros(config, seed)
    state = env.reset()
    total = config.t_max if iterations is None else iterations
    for t in range(total):
        b, k = divmod(t, BLOCK)
        if k == 0:
            draws = rngmod.slot_draws(rngmod.substream(seed, rngmod.TRAIN, b), BLOCK, config.n_users)
        row = draws[k]
        eps = params.epsilon(t)
        action = select_action(table, state, eps, float(row[0]))
        outcome = env.step(state, action, row[1], row[2:])
        td_update(table, state, action, outcome.reward, outcome.state_after, params, eps)
        state = outcome.state_after
    table.iteration = total
    table.cursor = state.aoi
    return table


@dataclass(frozen=True)
class ProgressRow:
    iteration: int
    epsilon: float
    mean_reward: float
    probe_return: float


def train(config: ScenarioConfig, seed: int, resume: QTable | None = None,
          stop_at: int | None = None,
          progress: Callable[[ProgressRow], None] | None = None,
          checkpoint_path=None) -> QTable:
    """Run EAU for ``config.t_max`` iterations (or up to ``stop_at``).

    ``resume`` continues a partially trained table produced by this function
    with the same config and seed. ``progress`` receives a row every
    ``config.progress_every`` iterations; with ``checkpoint_path`` the table
    is saved every ``config.checkpoint_every`` iterations and at the end.
    """
    env = Environment(config)
    params = LearnerParams.from_config(config)
    if resume is None:
        table = QTable.zeros(config, seed)
    else:
        resume.check_matches(config)
        if resume.t_max != config.t_max or resume.seed != seed:
            raise QTableError("cannot resume: table was trained with a different t_max or seed")
        table = resume
    end = config.t_max if stop_at is None else min(stop_at, config.t_max)

    state = np.asarray(table.cursor, dtype=np.int64)
    req_probs = np.asarray(config.request_probs, dtype=np.float64)
    weights = np.asarray(config.user_weights, dtype=np.float64)
    radix = radix_weights(config.n_users, config.m_max)
    every_p, every_c = config.progress_every, config.checkpoint_every

    window_sum, window_n = 0.0, 0
    t = table.iteration
    block, draws = -1, None
    while t < end:
        b, offset = divmod(t, BLOCK)
        if b != block:
            block = b
            draws = rngmod.slot_draws(rngmod.substream(seed, rngmod.TRAIN, b), BLOCK, config.n_users)
        stop = min(end, (b + 1) * BLOCK, (t // every_p + 1) * every_p, (t // every_c + 1) * every_c)
        reward_sum, reward_min = _kernels.train_segment(
            table.values, state, draws[offset:offset + stop - t], t, config.t_max,
            config.eps_start, config.eps_end, config.step_size, config.discount, params.c1,
            config.beta1, config.beta2, config.update_energy, weights, config.slot_duration,
            req_probs, env.p_fail, config.m_max, radix)
        if reward_min <= 0:
            raise AssertionError(f"non-positive reward {reward_min} during training")
        window_sum += reward_sum
        window_n += stop - t
        t = stop
        table.iteration = t
        table.cursor = tuple(int(a) for a in state)
        if progress is not None and t % every_p == 0:
            progress(ProgressRow(t, params.epsilon(t), window_sum / window_n,
                                 _probe(table, config, seed, t // every_p)))
            window_sum, window_n = 0.0, 0
        if checkpoint_path is not None and t % every_c == 0:
            table.save(checkpoint_path)
            log.info("checkpoint at iteration %d -> %s", t, checkpoint_path)
    if checkpoint_path is not None:
        table.save(checkpoint_path)
    return table


def _probe(table: QTable, config: ScenarioConfig, seed: int, index: int) -> float:
    # one greedy evaluation run on its own substream; the import is local to
    # avoid a cycle (harness imports the learner)
    from aoicache.harness import evaluate
    from aoicache.policies import Policy

    return evaluate(Policy.greedy(table), config, seed, run=index, stream=rngmod.PROBE).discounted_return
