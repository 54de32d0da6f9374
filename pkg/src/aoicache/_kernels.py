"""Compiled inner loops for training and evaluation.

These mirror ``environment.Environment.step``, ``learner.td_update`` and
``policies.decide`` statement for statement, consuming the same per-slot
uniform draws (see ``rng.slot_draws``), so results are bit-identical to the
pure-Python path; the test suite checks that.
"""

import numpy as np
from numba import njit

ZERO_WAIT = 0
NEVER = 1
PERIODIC = 2
RANDOM = 3
GREEDY = 4


@njit(cache=True)
def _transition(state, action, u_channel, draws_row, req_probs, p_fail, m_max):
    """In-place slot transition; returns update success (0/1)."""
    success = 0
    if action == 1 and not (u_channel < p_fail):
        success = 1
    if success == 1:
        state[0] = 1
    elif state[0] < m_max:
        state[0] += 1
    for n in range(state.shape[0] - 1):
        if draws_row[2 + n] < req_probs[n]:
            state[n + 1] = state[0]
        elif state[n + 1] < m_max:
            state[n + 1] += 1
    return success


@njit(cache=True)
def _index(state, radix):
    idx = 0
    for m in range(state.shape[0]):
        idx += (state[m] - 1) * radix[m]
    return idx


@njit(cache=True)
def _aoi_term(state, weights, slot_duration):
    total = 0.0
    for n in range(state.shape[0] - 1):
        total += weights[n] * (state[n + 1] * slot_duration)
    return total


@njit(cache=True)
def train_segment(q, state, draws, t0, t_max, eps_start, eps_end, alpha, discount, c1,
                  beta1, beta2, energy, weights, slot_duration, req_probs, p_fail, m_max, radix):
    """Run ``draws.shape[0]`` expected-Sarsa iterations starting at global iteration ``t0``.

    ``q`` and ``state`` are updated in place. Returns (sum of rewards, min reward).
    """
    reward_sum = 0.0
    reward_min = np.inf
    s = _index(state, radix)
    for k in range(draws.shape[0]):
        t = t0 + k
        eps = eps_start + t * (eps_end - eps_start) / t_max
        greedy = 1 if q[2 * s + 1] > q[2 * s] else 0
        action = greedy if draws[k, 0] < eps else 1 - greedy

        _transition(state, action, draws[k, 1], draws[k], req_probs, p_fail, m_max)
        cost = beta1 * _aoi_term(state, weights, slot_duration) + beta2 * action * energy
        reward = c1 - cost

        s_next = _index(state, radix)
        g_next = 1 if q[2 * s_next + 1] > q[2 * s_next] else 0
        expected = eps * q[2 * s_next + g_next] + (1.0 - eps) * q[2 * s_next + 1 - g_next]
        i = 2 * s + action
        q[i] = q[i] + alpha * (reward + discount * expected - q[i])

        reward_sum += reward
        if reward < reward_min:
            reward_min = reward
        s = s_next
    return reward_sum, reward_min


@njit(cache=True)
def evaluate_run(kind, param, greedy, draws, n_users, m_max, radix, c1, beta1, beta2, energy,
                 weights, slot_duration, req_probs, p_fail, discount):
    """Discounted (return, cost, weighted AoI in s, energy in mJ) of one run."""
    state = np.ones(n_users + 1, dtype=np.int64)
    disc = 1.0
    ret = 0.0
    cost_total = 0.0
    aoi_total = 0.0
    energy_total = 0.0
    for t in range(draws.shape[0]):
        if kind == ZERO_WAIT:
            action = 1
        elif kind == NEVER:
            action = 0
        elif kind == PERIODIC:
            action = 1 if t % int(param) == 0 else 0
        elif kind == RANDOM:
            action = 1 if draws[t, 0] < param else 0
        else:
            action = int(greedy[_index(state, radix)])
        _transition(state, action, draws[t, 1], draws[t], req_probs, p_fail, m_max)
        aoi = _aoi_term(state, weights, slot_duration)
        cost = beta1 * aoi + beta2 * action * energy
        ret += disc * (c1 - cost)
        cost_total += disc * cost
        aoi_total += disc * aoi
        energy_total += disc * (action * energy)
        disc *= discount
    return ret, cost_total, aoi_total, energy_total


@njit(cache=True)
def simulate_ages(kind, param, greedy, draws, n_users, m_max, radix, req_probs, p_fail):
    """Age trajectory of one run: (T+1, N+1) ages with the initial state in row 0,
    plus the action and update success of every slot."""
    n_slots = draws.shape[0]
    ages = np.empty((n_slots + 1, n_users + 1), dtype=np.int64)
    actions = np.empty(n_slots, dtype=np.int64)
    successes = np.empty(n_slots, dtype=np.int64)
    state = np.ones(n_users + 1, dtype=np.int64)
    ages[0] = state
    for t in range(n_slots):
        if kind == ZERO_WAIT:
            action = 1
        elif kind == NEVER:
            action = 0
        elif kind == PERIODIC:
            action = 1 if t % int(param) == 0 else 0
        elif kind == RANDOM:
            action = 1 if draws[t, 0] < param else 0
        else:
            action = int(greedy[_index(state, radix)])
        successes[t] = _transition(state, action, draws[t, 1], draws[t], req_probs, p_fail, m_max)
        actions[t] = action
        ages[t + 1] = state
    return ages, actions, successes
