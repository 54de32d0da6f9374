"""Sensor-to-ECN link under quasi-static Rayleigh fading.

All quantities are linear SI (bits, seconds, Hz, watts, W/Hz). The received
SNR is exponential with mean ``p * g / (B * noise_density)``, so whether an
update packet of ``F`` bits fits in one update phase is a single Bernoulli
event per slot.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class LinkParams:
    packet_size: float  # bits
    update_duration: float  # s
    bandwidth: float  # Hz
    transmit_power: float  # W
    mean_channel_gain: float  # linear
    noise_density: float  # W/Hz

    def __post_init__(self):
        for name in ("packet_size", "update_duration", "bandwidth", "transmit_power",
                     "mean_channel_gain", "noise_density"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")

    @property
    def required_rate(self) -> float:
        return self.packet_size / self.update_duration


@dataclass(frozen=True)
class LinkDerived:
    snr_threshold: float
    mean_snr: float
    failure_prob: float


def snr_threshold(link: LinkParams) -> float:
    """Minimum linear SNR for Shannon capacity ``B log2(1 + snr)`` to reach ``F / D_u``."""
    # expm1 keeps precision when R/B is tiny
    return math.expm1(link.required_rate / link.bandwidth * math.log(2.0))


def mean_snr(link: LinkParams) -> float:
    return link.transmit_power * link.mean_channel_gain / (link.bandwidth * link.noise_density)


def outage_probability(threshold: float, avg_snr: float) -> float:
    """P(snr < threshold) for exponentially distributed snr with mean ``avg_snr``."""
    if threshold < 0 or avg_snr <= 0:
        raise ValueError("threshold must be >= 0 and avg_snr > 0")
    return -math.expm1(-threshold / avg_snr)


def failure_probability(link: LinkParams) -> float:
    return outage_probability(snr_threshold(link), mean_snr(link))


def derive(link: LinkParams) -> LinkDerived:
    threshold = snr_threshold(link)
    avg = mean_snr(link)
    return LinkDerived(threshold, avg, outage_probability(threshold, avg))


def update_fails(p_fail: float, u: float) -> bool:
    """Resolve one update attempt from a Uniform(0,1) draw ``u``."""
    return u < p_fail


def sample_update_success(p_fail: float, rng: np.random.Generator) -> bool:
    if not 0.0 <= p_fail <= 1.0:
        raise ValueError(f"p_fail must lie in [0, 1], got {p_fail!r}")
    return not update_fails(p_fail, rng.random())


def sample_update_success_from_gain(link: LinkParams, rng: np.random.Generator, size=None):
    """Draw Rayleigh power gains and test the SNR against the threshold.

    Slower twin of :func:`sample_update_success`, kept so the closed-form
    Bernoulli shortcut can be checked against an explicit channel draw.
    """
    gain = rng.exponential(link.mean_channel_gain, size=size)
    snr = link.transmit_power * gain / (link.bandwidth * link.noise_density)
    return snr >= snr_threshold(link)
