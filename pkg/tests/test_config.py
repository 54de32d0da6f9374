import math

import pytest

from aoicache.config import (ScenarioConfig, builtin_scenario, config_from_dict, dump_config,
                             load_config, parse_quantity)


@pytest.mark.parametrize("text,dim,expected", [
    ("10 mW", "power", 0.01),
    ("10 dBm", "power", 0.01),
    ("0 dBW", "power", 1.0),
    ("-174 dBm/Hz", "psd", 10 ** -20.4),
    ("-120 dB", "ratio", 1e-12),
    ("200 kbit", "bits", 2e5),
    ("200 Kbits", "bits", 2e5),
    ("100 KHz", "frequency", 1e5),
    ("5 mJ", "energy", 5.0),
    ("0.005 J", "energy", 5.0),
    ("1 s", "time", 1.0),
    (2.5, "time", 2.5),
])
def test_parse_quantity(text, dim, expected):
    assert parse_quantity(text, dim) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("text,dim", [("10 furlongs", "power"), ("abc", "time"), ("3 dB", "time")])
def test_parse_quantity_rejects(text, dim):
    with pytest.raises(ValueError):
        parse_quantity(text, dim)


@pytest.mark.parametrize("name", ["paper_iv", "fig3_desk", "desk", "tiny"])
def test_round_trip(tmp_path, name):
    config = builtin_scenario(name)
    path = tmp_path / "c.yaml"
    dump_config(config, path)
    assert load_config(path) == config
    assert dump_config(load_config(path)) == path.read_text()


def test_paper_scenario_matches_defaults(paper):
    assert paper == ScenarioConfig()
    d = paper.derived()
    assert d["snr_threshold"] == 3.0
    assert d["update_energy_mJ"] == 15.0
    assert d["table_size"] == 320_000
    assert d["reward_constant_eq"] == pytest.approx(55.0, abs=1e-12)


def test_fingerprint_tracks_scenario(paper):
    assert paper.fingerprint() == paper.replace(seed=3, horizon=10, t_max=5).fingerprint()
    assert paper.fingerprint() != paper.replace(beta1=2.0).fingerprint()
    assert paper.fingerprint() != builtin_scenario("desk").fingerprint()


@pytest.mark.parametrize("changes", [
    dict(request_probs=(0.6, 1.2, 0.6)),
    dict(user_weights=(0.5, 0.25, 0.5)),
    dict(user_weights=(0.5, 0.5)),
    dict(beta1=-1.0),
    dict(eps_start=0.9, eps_end=0.5),
    dict(discount=1.0),
    dict(step_size=0.0),
    dict(bandwidth=0.0),
    dict(sweep_mode="sometimes"),
])
def test_validation(paper, changes):
    with pytest.raises(ValueError):
        paper.replace(**changes)


def test_unknown_field_rejected():
    with pytest.raises(ValueError):
        config_from_dict({"n_user": 3})


def test_uniform_weights_and_scalar_probs():
    c = config_from_dict({"n_users": 4, "request_probs": 0.3, "user_weights": "uniform"})
    assert c.request_probs == (0.3,) * 4
    assert math.isclose(sum(c.user_weights), 1.0)
