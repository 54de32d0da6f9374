"""Scenario configuration.

Config files are YAML. Physical fields carry their unit in the value string
(``"10 mW"``, ``"-174 dBm/Hz"``, ``"200 kbit"``); decibel forms are converted
to linear once, at load time. :func:`dump_config` writes the canonical linear
form, which loads back to an identical :class:`ScenarioConfig`.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import logging
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import yaml

from aoicache import channel

log = logging.getLogger(__name__)

# unit -> factor to the canonical unit of that dimension
_LINEAR_UNITS = {
    "time": ("s", {"s": 1.0, "ms": 1e-3, "us": 1e-6}),
    "bits": ("bit", {"bit": 1.0, "bits": 1.0, "kbit": 1e3, "kbits": 1e3, "Kbit": 1e3,
                     "Kbits": 1e3, "Mbit": 1e6, "Mbits": 1e6}),
    "frequency": ("Hz", {"Hz": 1.0, "kHz": 1e3, "KHz": 1e3, "MHz": 1e6, "GHz": 1e9}),
    "power": ("W", {"W": 1.0, "mW": 1e-3, "uW": 1e-6}),
    "energy": ("mJ", {"J": 1e3, "mJ": 1.0, "uJ": 1e-3}),
    "psd": ("W/Hz", {"W/Hz": 1.0, "mW/Hz": 1e-3}),
    "ratio": ("", {"": 1.0}),
}
# unit -> (dB offset to the canonical unit) for log-domain inputs
_DB_UNITS = {
    "power": {"dBW": 0.0, "dBm": -30.0},
    "psd": {"dBW/Hz": 0.0, "dBm/Hz": -30.0},
    "ratio": {"dB": 0.0},
}

_QUANTITY = re.compile(r"^\s*([-+]?[0-9.]+(?:[eE][-+]?[0-9]+)?)\s*(\S*)\s*$")


def parse_quantity(value, dimension: str) -> float:
    """Convert ``value`` (number or ``"<number> <unit>"``) to the canonical unit."""
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if not isinstance(value, str):
        raise ValueError(f"cannot parse {value!r} as {dimension}")
    m = _QUANTITY.match(value)
    if m is None:
        raise ValueError(f"cannot parse {value!r} as {dimension}")
    number, unit = float(m.group(1)), m.group(2)
    linear = _LINEAR_UNITS[dimension][1]
    if unit in linear:
        return number * linear[unit]
    db = _DB_UNITS.get(dimension, {})
    if unit in db:
        return 10.0 ** ((number + db[unit]) / 10.0)
    raise ValueError(f"unknown unit {unit!r} for {dimension} in {value!r}")


def _format_quantity(value: float, dimension: str) -> str:
    unit = _LINEAR_UNITS[dimension][0]
    return f"{value!r} {unit}" if unit else repr(value)


def _parse_fraction(value) -> float:
    if isinstance(value, str):
        return float(Fraction(value.strip()))
    return float(value)


# field name -> dimension, for fields that carry units in the file
_UNITS = {
    "update_duration": "time",
    "delivery_duration": "time",
    "packet_size": "bits",
    "bandwidth": "frequency",
    "transmit_power": "power",
    "sensing_energy": "energy",
    "mean_channel_gain": "ratio",
    "noise_density": "psd",
}


@dataclass(frozen=True)
class ScenarioConfig:
    """Every physical, cost and learning parameter of one scenario.

    Internal units: seconds, bits, Hz, watts, W/Hz, energy in mJ. AoI is kept
    in whole slots of ``slot_duration = D_u + D_d`` seconds.
    """

    name: str = "paper_iv"
    n_users: int = 3
    update_duration: float = 1.0
    delivery_duration: float = 1.0
    packet_size: float = 200e3
    bandwidth: float = 100e3
    transmit_power: float = 10e-3
    sensing_energy: float = 5.0
    mean_channel_gain: float = 1e-12
    noise_density: float = 10.0 ** (-20.4)
    request_probs: tuple[float, ...] = (0.6, 0.6, 0.6)
    user_weights: tuple[float, ...] = (1 / 3, 1 / 3, 1 / 3)
    beta1: float = 1.0
    beta2: float = 1.0
    m_max: int = 20
    step_size: float = 0.1
    discount: float = 0.99
    eps_start: float = 0.5
    eps_end: float = 0.999
    t_max: int = 10**8
    horizon: int = 600
    eval_runs: int = 1000
    seed: int = 0
    checkpoint_every: int = 10**7
    progress_every: int = 10**6
    policies: tuple[str, ...] = ("eau", "zero_wait")
    sweep_mode: str = "single_table"
    output_dir: str = "results/paper_iv"

    def __post_init__(self):
        # normalize list inputs so equality and hashing behave
        for name in ("request_probs", "user_weights"):
            object.__setattr__(self, name, tuple(float(x) for x in getattr(self, name)))
        object.__setattr__(self, "policies", tuple(str(p) for p in self.policies))
        self.validate()

    def validate(self) -> None:
        n = self.n_users
        if n < 1:
            raise ValueError("n_users must be >= 1")
        if len(self.request_probs) != n or len(self.user_weights) != n:
            raise ValueError("request_probs and user_weights need one entry per user")
        if any(not 0.0 <= p <= 1.0 for p in self.request_probs):
            raise ValueError("request probabilities must lie in [0, 1]")
        if any(not 0.0 < w <= 1.0 for w in self.user_weights):
            raise ValueError("user weights must lie in (0, 1]")
        if not math.isclose(sum(self.user_weights), 1.0, rel_tol=0, abs_tol=1e-9):
            raise ValueError("user weights must sum to 1")
        if self.beta1 < 0 or self.beta2 < 0:
            raise ValueError("beta1 and beta2 must be non-negative")
        if self.m_max < 1:
            raise ValueError("m_max must be >= 1")
        if self.delivery_duration < 0 or self.sensing_energy < 0:
            raise ValueError("delivery_duration and sensing_energy must be non-negative")
        if not 0.0 < self.step_size <= 1.0:
            raise ValueError("step_size must lie in (0, 1]")
        if not 0.0 < self.discount < 1.0:
            raise ValueError("discount must lie in (0, 1)")
        if not 0.0 < self.eps_start <= self.eps_end < 1.0:
            raise ValueError("need 0 < eps_start <= eps_end < 1")
        if self.t_max < 0 or self.horizon < 0 or self.eval_runs < 0:
            raise ValueError("t_max, horizon and eval_runs must be non-negative")
        if self.checkpoint_every < 1 or self.progress_every < 1:
            raise ValueError("checkpoint_every and progress_every must be >= 1")
        if self.sweep_mode not in ("single_table", "retrain"):
            raise ValueError("sweep_mode must be 'single_table' or 'retrain'")
        self.link  # LinkParams validates the physical fields

    # -- derived quantities ------------------------------------------------

    @property
    def link(self) -> channel.LinkParams:
        return channel.LinkParams(
            packet_size=self.packet_size,
            update_duration=self.update_duration,
            bandwidth=self.bandwidth,
            transmit_power=self.transmit_power,
            mean_channel_gain=self.mean_channel_gain,
            noise_density=self.noise_density,
        )

    @property
    def slot_duration(self) -> float:
        return self.update_duration + self.delivery_duration

    @property
    def failure_prob(self) -> float:
        return channel.failure_probability(self.link)

    @property
    def update_energy(self) -> float:
        """E = E_s + p * D_u, in mJ."""
        return self.sensing_energy + self.transmit_power * self.update_duration * 1e3

    @property
    def n_states(self) -> int:
        return self.m_max ** (self.n_users + 1)

    @property
    def table_size(self) -> int:
        return 2 * self.n_states

    def derived(self) -> dict:
        from aoicache.environment import reward_constant, reward_constant_unpadded

        d = channel.derive(self.link)
        return {
            "required_rate_bps": self.link.required_rate,
            "snr_threshold": d.snr_threshold,
            "mean_snr": d.mean_snr,
            "failure_prob": d.failure_prob,
            "slot_duration_s": self.slot_duration,
            "update_energy_mJ": self.update_energy,
            "reward_constant_eq": reward_constant_unpadded(self),
            "reward_constant": reward_constant(self),
            "table_size": self.table_size,
        }

    def log_derived(self) -> dict:
        d = self.derived()
        for key, value in d.items():
            log.info("%s: %s = %r", self.name, key, value)
        return d

    def fingerprint(self) -> bytes:
        """SHA-256 over the fields that shape the MDP and the learning rule.

        Evaluation-only fields (horizon, eval_runs, seeds, paths) and the
        training length are left out so a trained table can be evaluated under
        different experiment settings.
        """
        keys = ("n_users", "update_duration", "delivery_duration", "packet_size", "bandwidth",
                "transmit_power", "sensing_energy", "mean_channel_gain", "noise_density",
                "request_probs", "user_weights", "beta1", "beta2", "m_max", "step_size",
                "discount", "eps_start", "eps_end")
        payload = json.dumps({k: getattr(self, k) for k in keys}, sort_keys=True)
        return hashlib.sha256(payload.encode()).digest()

    def replace(self, **changes) -> "ScenarioConfig":
        return dataclasses.replace(self, **changes)


def config_from_dict(raw: dict) -> ScenarioConfig:
    raw = dict(raw)
    known = {f.name for f in dataclasses.fields(ScenarioConfig)}
    unknown = set(raw) - known
    if unknown:
        raise ValueError(f"unknown config fields: {sorted(unknown)}")
    for name, dim in _UNITS.items():
        if name in raw:
            raw[name] = parse_quantity(raw[name], dim)
    n = int(raw.get("n_users", ScenarioConfig.n_users))
    if "request_probs" in raw:
        probs = raw["request_probs"]
        raw["request_probs"] = [float(probs)] * n if not isinstance(probs, list) else [float(p) for p in probs]
    if "user_weights" in raw:
        if raw["user_weights"] == "uniform":
            raw["user_weights"] = [1.0 / n] * n
        else:
            raw["user_weights"] = [_parse_fraction(w) for w in raw["user_weights"]]
    for name in ("t_max", "horizon", "eval_runs", "seed", "checkpoint_every", "progress_every",
                 "m_max", "n_users"):
        if name in raw:
            raw[name] = int(float(raw[name])) if isinstance(raw[name], str) else int(raw[name])
    for name in ("beta1", "beta2", "step_size", "discount", "eps_start", "eps_end"):
        if name in raw:
            raw[name] = float(raw[name])
    return ScenarioConfig(**raw)


def config_to_dict(config: ScenarioConfig) -> dict:
    out = {}
    for f in dataclasses.fields(config):
        value = getattr(config, f.name)
        if f.name in _UNITS:
            value = _format_quantity(value, _UNITS[f.name])
        elif isinstance(value, tuple):
            value = list(value)
        out[f.name] = value
    return out


def load_config(path) -> ScenarioConfig:
    with open(path) as fh:
        raw = yaml.safe_load(fh) or {}
    return config_from_dict(raw)


def dump_config(config: ScenarioConfig, path=None) -> str:
    text = yaml.safe_dump(config_to_dict(config), sort_keys=False)
    if path is not None:
        Path(path).write_text(text)
    return text


def builtin_scenario(name: str) -> ScenarioConfig:
    """Load one of the committed scenarios (``paper_iv``, ``desk``, ``desk_ci``, ``tiny``)."""
    path = Path(__file__).parent / "scenarios" / f"{name}.yaml"
    if not path.exists():
        raise ValueError(f"no built-in scenario named {name!r}")
    return load_config(path)


def resolve_config(spec: str) -> ScenarioConfig:
    """A config file path, or the name of a built-in scenario."""
    if Path(spec).exists():
        return load_config(spec)
    return builtin_scenario(spec)
