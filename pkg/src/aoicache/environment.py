"""Slotted status-update MDP.

Per slot: users' requests arrive and are served from the cache, then the ECN
decides whether the sensor updates; a successful update resets the ECN age
for the next slot. Ages are integers in units of one slot ``D = D_u + D_d``
and saturate at ``m_max``.

The state used for a decision is the age vector just before the update
phase. ``step`` draws the next slot's requests, resolves the update attempt
and returns the post-transition ages; cost and reward are charged to the
action on those ages.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from aoicache import channel
from aoicache.config import ScenarioConfig


@dataclass(frozen=True)
class SlotState:
    """Ages in slots: ``aoi[0]`` is the ECN, ``aoi[1:]`` the users."""

    aoi: tuple[int, ...]

    @classmethod
    def initial(cls, n_users: int) -> "SlotState":
        return cls((1,) * (n_users + 1))

    @property
    def ecn(self) -> int:
        return self.aoi[0]

    @property
    def users(self) -> tuple[int, ...]:
        return self.aoi[1:]

    @property
    def n_users(self) -> int:
        return len(self.aoi) - 1

    def check(self, m_max: int) -> "SlotState":
        if any(not 1 <= a <= m_max for a in self.aoi):
            raise ValueError(f"AoI out of range 1..{m_max}: {self.aoi}")
        return self


@dataclass(frozen=True)
class CostParams:
    beta1: float
    beta2: float
    weights: tuple[float, ...]
    update_energy: float  # mJ

    @classmethod
    def from_config(cls, config: ScenarioConfig) -> "CostParams":
        return cls(config.beta1, config.beta2, config.user_weights, config.update_energy)


@dataclass(frozen=True)
class SlotOutcome:
    state_before: SlotState
    requests: tuple[int, ...]
    action: int
    update_success: int
    cost: float
    reward: float
    state_after: SlotState


def requests_from_uniforms(request_probs: Sequence[float], u: Sequence[float]) -> tuple[int, ...]:
    return tuple(int(ui < p) for ui, p in zip(u, request_probs))


def sample_requests(request_probs: Sequence[float], rng: np.random.Generator) -> tuple[int, ...]:
    if any(not 0.0 <= p <= 1.0 for p in request_probs):
        raise ValueError("request probabilities must lie in [0, 1]")
    return requests_from_uniforms(request_probs, rng.random(len(request_probs)))


def evolve_aoi(state: SlotState, requests: Sequence[int], prev_success: int, m_max: int) -> SlotState:
    ecn = 1 if prev_success else min(state.ecn + 1, m_max)
    users = tuple(ecn if r else min(a + 1, m_max) for a, r in zip(state.users, requests))
    return SlotState((ecn,) + users)


def weighted_user_aoi(state: SlotState, weights: Sequence[float], slot_duration: float) -> float:
    """Sum of w_n * age_n, in seconds."""
    return sum(w * (a * slot_duration) for w, a in zip(weights, state.users))


def slot_cost(state_after: SlotState, action: int, params: CostParams, slot_duration: float) -> float:
    aoi_term = weighted_user_aoi(state_after, params.weights, slot_duration)
    return params.beta1 * aoi_term + params.beta2 * action * params.update_energy


def slot_reward(cost: float, c1: float) -> float:
    return c1 - cost


def reward_constant_unpadded(config: ScenarioConfig) -> float:
    """beta1 * sum_n w_n * (m_max * D) + beta2 * E: the largest possible slot cost."""
    worst_aoi = sum(w * config.m_max * config.slot_duration for w in config.user_weights)
    return config.beta1 * worst_aoi + config.beta2 * config.update_energy


def reward_constant(config: ScenarioConfig) -> float:
    """Largest slot cost plus one update's weighted energy, so every reward is > 0."""
    pad = config.beta2 * config.update_energy
    if pad <= 0:
        pad = config.beta1 * config.slot_duration
    if pad <= 0:
        pad = 1.0
    return reward_constant_unpadded(config) + pad


class Environment:
    """One scenario's transition function; holds no trajectory state."""

    def __init__(self, config: ScenarioConfig):
        self.config = config
        self.n_users = config.n_users
        self.m_max = config.m_max
        self.request_probs = config.request_probs
        self.p_fail = config.failure_prob
        self.slot_duration = config.slot_duration
        self.cost_params = CostParams.from_config(config)
        self.c1 = reward_constant(config)

    def reset(self) -> SlotState:
        return SlotState.initial(self.n_users)

    def step(self, state: SlotState, action: int, u_channel: float,
             u_requests: Sequence[float]) -> SlotOutcome:
        """Advance one slot given the slot's uniform draws."""
        if action not in (0, 1):
            raise ValueError(f"action must be 0 or 1, got {action!r}")
        success = int(action == 1 and not channel.update_fails(self.p_fail, u_channel))
        requests = requests_from_uniforms(self.request_probs, u_requests)
        after = evolve_aoi(state, requests, success, self.m_max)
        cost = slot_cost(after, action, self.cost_params, self.slot_duration)
        return SlotOutcome(state, requests, action, success, cost,
                           slot_reward(cost, self.c1), after)

    def step_rng(self, state: SlotState, action: int, rng: np.random.Generator) -> SlotOutcome:
        u = rng.random(self.n_users + 1)
        return self.step(state, action, u[0], u[1:])


def trace_header(n_users: int) -> list[str]:
    return (["slot", "aoi_ecn"] + [f"aoi_user_{n}" for n in range(1, n_users + 1)]
            + [f"r_{n}" for n in range(1, n_users + 1)]
            + ["action", "success", "cost", "reward"])


def write_trace(outcomes: Iterable[SlotOutcome], path, n_users: int) -> None:
    """Per-slot CSV; ages are post-transition, matching what the cost is charged on."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(trace_header(n_users))
        for t, o in enumerate(outcomes, start=1):
            writer.writerow([t, *o.state_after.aoi, *o.requests, o.action, o.update_success,
                             repr(o.cost), repr(o.reward)])
