import numpy as np
import pytest

from rspolar.channel import ChannelParams, rng_for, transmit
from rspolar.polar import LLR_MAX


def test_noise_variance_formula():
    p = ChannelParams(kind="awgn", ebn0_db=2.0, rate=1.0 / 3.0)
    assert abs(p.noise_var - 1.0 / (2.0 * (1.0 / 3.0) * 10.0 ** 0.2)) < 1e-15
    assert abs(p.noise_var - 0.9464360) < 1e-6


def test_param_validation():
    with pytest.raises(ValueError):
        ChannelParams(kind="rayleigh")
    with pytest.raises(ValueError):
        ChannelParams(rate=0.0)
    with pytest.raises(ValueError):
        ChannelParams(kind="bec", eps=1.5)


def test_high_snr_sign_match():
    p = ChannelParams(kind="awgn", ebn0_db=40.0, rate=1.0, seed=0)
    rng = np.random.default_rng(0)
    bits = rng.integers(0, 2, 4096).astype(np.uint8)
    llr = transmit(p, bits)
    assert np.all((llr < 0) == (bits == 1))


def test_empirical_noise_variance():
    p = ChannelParams(kind="awgn", ebn0_db=2.0, rate=1.0 / 3.0, seed=1)
    n = 1_000_000
    bits = np.zeros(n, dtype=np.uint8)
    llr = transmit(p, bits)
    y = llr * p.noise_var / 2.0
    noise = y - 1.0
    assert abs(noise.var() / p.noise_var - 1.0) < 0.01


def test_bec_extremes_and_fraction():
    assert np.all(transmit(ChannelParams(kind="bec", eps=1.0, seed=2),
                           np.zeros(100, dtype=np.uint8)) == 0)
    p = ChannelParams(kind="bec", eps=0.3, seed=3)
    n = 200_000
    bits = np.ones(n, dtype=np.uint8)
    llr = transmit(p, bits)
    frac = np.mean(llr == 0)
    sigma = np.sqrt(0.3 * 0.7 / n)
    assert abs(frac - 0.3) <= 3 * sigma
    assert np.all(llr[llr != 0] == -LLR_MAX)


def test_seed_determinism_and_stream_separation():
    p = ChannelParams(kind="awgn", ebn0_db=0.0, rate=0.5, seed=7)
    bits = np.zeros(64, dtype=np.uint8)
    a = transmit(p, bits, stream=0)
    b = transmit(p, bits, stream=0)
    c = transmit(p, bits, stream=1)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    d = transmit(ChannelParams(kind="awgn", ebn0_db=0.0, rate=0.5, seed=8),
                 bits, stream=0)
    assert not np.array_equal(a, d)


def test_rng_for_is_philox_counter_based():
    g = rng_for(5, 1, 2, 3)
    assert type(g.bit_generator).__name__ == "Philox"
    assert np.array_equal(rng_for(5, 1, 2, 3).integers(0, 1 << 30, 8),
                          g.integers(0, 1 << 30, 8))
