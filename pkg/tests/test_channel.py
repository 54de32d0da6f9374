import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from aoicache import channel
from aoicache.channel import LinkParams


def link(**kw):
    base = dict(packet_size=200e3, update_duration=1.0, bandwidth=100e3, transmit_power=10e-3,
                mean_channel_gain=1e-12, noise_density=10 ** -20.4)
    base.update(kw)
    return LinkParams(**base)


def test_snr_threshold_examples():
    assert channel.snr_threshold(link()) == 3.0
    assert channel.snr_threshold(link(packet_size=100e3)) == 1.0
    wide = link(bandwidth=1e9 * 200e3)
    assert channel.snr_threshold(wide) < 1e-6


def test_paper_link_values():
    assert channel.mean_snr(link()) == pytest.approx(25.119, abs=1e-3)
    assert channel.failure_probability(link()) == pytest.approx(0.1125, abs=1e-3)


def test_failure_probability_matches_monte_carlo():
    # oracle: draw exponential SNRs and count the ones below the threshold
    rng = np.random.default_rng(7)
    lk = link()
    n = 10**7
    snr = rng.exponential(channel.mean_snr(lk), size=n)
    frac = np.mean(snr < channel.snr_threshold(lk))
    p = channel.failure_probability(lk)
    assert abs(frac - p) < 3 * math.sqrt(p * (1 - p) / n)


def test_failure_probability_limits():
    assert channel.outage_probability(0.0, 25.0) == 0.0
    assert channel.failure_probability(link(mean_channel_gain=1e10)) < 1e-12


@pytest.mark.parametrize("field", ["packet_size", "update_duration", "bandwidth",
                                   "transmit_power", "mean_channel_gain", "noise_density"])
@pytest.mark.parametrize("bad", [0.0, -1.0, math.inf])
def test_link_rejects_non_positive(field, bad):
    with pytest.raises(ValueError):
        link(**{field: bad})


def test_sample_update_success_edges():
    rng = np.random.default_rng(0)
    assert all(channel.sample_update_success(0.0, rng) for _ in range(1000))
    assert not any(channel.sample_update_success(1.0, rng) for _ in range(1000))
    with pytest.raises(ValueError):
        channel.sample_update_success(1.5, rng)


def test_sample_update_success_rate():
    rng = np.random.default_rng(1)
    p = 0.1125
    failures = sum(not channel.sample_update_success(p, rng) for _ in range(10**6))
    assert abs(failures / 10**6 - p) < 0.001


def test_sample_update_success_deterministic():
    a = [channel.sample_update_success(0.3, np.random.default_rng(5)) for _ in range(3)]
    r1, r2 = np.random.default_rng(9), np.random.default_rng(9)
    s1 = [channel.sample_update_success(0.3, r1) for _ in range(200)]
    s2 = [channel.sample_update_success(0.3, r2) for _ in range(200)]
    assert s1 == s2 and len(set(a)) == 1


def test_gain_sampling_agrees_with_closed_form():
    lk = link()
    rng = np.random.default_rng(3)
    n = 10**6
    ok_gain = channel.sample_update_success_from_gain(lk, rng, size=n).mean()
    ok_bern = (rng.random(n) >= channel.failure_probability(lk)).mean()
    p = channel.failure_probability(lk)
    sigma = math.sqrt(2 * p * (1 - p) / n)
    assert abs(ok_gain - ok_bern) < 4 * sigma


positive = st.floats(min_value=1e-3, max_value=1e3)


@settings(max_examples=200)
@given(t1=positive, t2=positive, g=positive)
def test_failure_monotone_in_threshold(t1, t2, g):
    lo, hi = sorted((t1, t2))
    assert channel.outage_probability(lo, g) <= channel.outage_probability(hi, g)


@settings(max_examples=200)
@given(t=positive, g1=positive, g2=positive)
def test_failure_decreasing_in_mean_snr(t, g1, g2):
    lo, hi = sorted((g1, g2))
    assert channel.outage_probability(t, hi) <= channel.outage_probability(t, lo)


@settings(max_examples=200)
@given(f1=st.floats(1e3, 1e6), f2=st.floats(1e3, 1e6), b1=st.floats(1e4, 1e6), b2=st.floats(1e4, 1e6))
def test_threshold_monotone_in_size_and_bandwidth(f1, f2, b1, b2):
    f_lo, f_hi = sorted((f1, f2))
    b_lo, b_hi = sorted((b1, b2))
    assert channel.snr_threshold(link(packet_size=f_lo, bandwidth=b1)) <= \
        channel.snr_threshold(link(packet_size=f_hi, bandwidth=b1))
    assert channel.snr_threshold(link(packet_size=f1, bandwidth=b_hi)) <= \
        channel.snr_threshold(link(packet_size=f1, bandwidth=b_lo))
