import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from aoicache.environment import SlotState
from aoicache.learner import train
from aoicache.qtable import FingerprintMismatch, QTable, QTableError, decode, encode


def test_encode_examples():
    assert encode(SlotState((1, 1, 1, 1)), 20) == 0
    assert encode(SlotState((20, 20, 20, 20)), 20) == 20**4 - 1 == 159_999
    assert encode(SlotState((2, 1, 1, 1)), 20) == 1
    assert encode(SlotState((1, 2, 1, 1)), 20) == 20


def test_encode_rejects_out_of_range():
    with pytest.raises(ValueError):
        encode(SlotState((0, 1, 1, 1)), 20)
    with pytest.raises(ValueError):
        encode(SlotState((21, 1, 1, 1)), 20)
    with pytest.raises(ValueError):
        decode(20**4, 3, 20)


def test_table_size_matches_paper(paper):
    table = QTable.zeros(paper)
    assert table.values.size == paper.table_size == 320_000


@pytest.mark.parametrize("n_users,m_max", [(1, 6), (2, 6), (3, 4), (2, 1)])
def test_encode_is_bijective_exhaustively(n_users, m_max):
    states = list(itertools.product(range(1, m_max + 1), repeat=n_users + 1))
    indices = [encode(SlotState(s), m_max) for s in states]
    assert sorted(indices) == list(range(m_max ** (n_users + 1)))
    assert all(decode(i, n_users, m_max).aoi == s for i, s in zip(indices, states))


@settings(max_examples=500)
@given(st.lists(st.integers(1, 20), min_size=4, max_size=4))
def test_round_trip_property(aoi):
    state = SlotState(tuple(aoi))
    assert decode(encode(state, 20), 3, 20) == state


def test_round_trip_ten_thousand_random_states():
    rng = np.random.default_rng(0)
    for aoi in rng.integers(1, 21, size=(10**4, 4)):
        state = SlotState(tuple(int(a) for a in aoi))
        assert decode(encode(state, 20), 3, 20) == state


@pytest.mark.parametrize("q0,q1,expected", [(1.0, 2.0, 1), (2.0, 2.0, 0), (3.0, 2.0, 0)])
def test_greedy_action(paper, q0, q1, expected):
    table = QTable.zeros(paper)
    s = SlotState((3, 4, 5, 6))
    table.set(s, 0, q0)
    table.set(s, 1, q1)
    assert table.greedy_action(s) == expected
    assert table.greedy_policy()[table.index(s)] == expected


def test_save_load_round_trip(tmp_path, desk):
    table = train(desk.replace(t_max=50_000), seed=2)
    path = tmp_path / "q.bin"
    table.save(path)
    loaded = QTable.load(path, desk)
    assert loaded.values.tobytes() == table.values.tobytes()
    assert (loaded.iteration, loaded.t_max, loaded.seed, loaded.cursor, loaded.fingerprint) == \
        (table.iteration, table.t_max, table.seed, table.cursor, table.fingerprint)
    assert loaded.to_bytes() == path.read_bytes()


def test_load_rejects_other_scenario(tmp_path, desk, paper):
    path = tmp_path / "q.bin"
    QTable.zeros(desk).save(path)
    with pytest.raises(FingerprintMismatch):
        QTable.load(path, desk.replace(n_users=3, request_probs=(0.6,) * 3,
                                       user_weights=(1 / 3,) * 3))
    with pytest.raises(FingerprintMismatch):
        QTable.load(path, desk.replace(beta1=2.0))


def test_load_rejects_corrupt_files(tmp_path, desk):
    path = tmp_path / "q.bin"
    QTable.zeros(desk).save(path)
    data = bytearray(path.read_bytes())
    data[200] ^= 0xFF
    path.write_bytes(bytes(data))
    with pytest.raises(QTableError, match="corrupt"):
        QTable.load(path)
    path.write_bytes(b"garbage")
    with pytest.raises(QTableError):
        QTable.load(path)


@pytest.mark.parametrize("split", [10**6, 333_333])
def test_resume_matches_uninterrupted(tmp_path, desk, split):
    config = desk.replace(t_max=2 * 10**6)
    full = train(config, seed=5)
    path = tmp_path / "ckpt.bin"
    train(config, seed=5, stop_at=split).save(path)
    part = QTable.load(path, config)
    assert part.iteration == split
    resumed = train(config, seed=5, resume=part)
    assert resumed.values.tobytes() == full.values.tobytes()
    assert resumed.cursor == full.cursor


def test_resume_rejects_other_seed(desk):
    config = desk.replace(t_max=1000)
    part = train(config, seed=1, stop_at=10)
    with pytest.raises(QTableError):
        train(config, seed=2, resume=part)
