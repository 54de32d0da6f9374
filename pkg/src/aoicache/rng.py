"""Counter-based random substreams.

Every consumer of randomness gets its own generator keyed by
``(master_seed, purpose, index...)`` so a given run or block is reproduced
exactly no matter how many other runs execute or in which order.
"""

from __future__ import annotations

import numpy as np

TRAIN = 1
EVAL = 2
CELL = 3
PROBE = 4
RETRAIN = 5

# Uniform draws consumed per slot: [action, channel, request_1..request_N].
ACTION_COL = 0
CHANNEL_COL = 1
REQUEST_COL = 2


def substream(seed: int, *key: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=key)))


def derive_seed(seed: int, *key: int) -> int:
    """A 63-bit child seed, used when a whole sub-experiment needs its own master seed."""
    state = np.random.SeedSequence(seed, spawn_key=key).generate_state(2, dtype=np.uint32)
    return int((int(state[0]) << 31) ^ int(state[1]))


def slot_draws(rng: np.random.Generator, n_slots: int, n_users: int) -> np.ndarray:
    """Uniform(0,1) draws for ``n_slots`` slots, one row per slot."""
    return rng.random((n_slots, n_users + 2))
