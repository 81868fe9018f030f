from math import exp, log1p

import numpy as np
import pytest

from rspolar.channel import ChannelParams, transmit
from rspolar.polar import (LLR_MAX, PolarCodeSpec, ScState,
                           bit_reversal_permutation,
                           estimate_bitchannels_bec, estimate_bitchannels_mc,
                           polar_encode, polar_transform, resume_with,
                           sc_decode, sc_decode_span, sc_symbol_paths,
                           select_frozen)


def kron_kernel(stages):
    f = np.array([[1, 0], [1, 1]], dtype=np.uint8)
    g = np.array([[1]], dtype=np.uint8)
    for _ in range(stages):
        g = np.kron(g, f)
    return g


def transform_oracle(u):
    """Matrix-multiply oracle for the bit-reversal-ordered transform."""
    n = len(u)
    g = kron_kernel(n.bit_length() - 1)
    return (np.asarray(u) @ g[:, bit_reversal_permutation(n)]) % 2


def bec_spec(n, k, eps=0.5):
    return select_frozen(estimate_bitchannels_bec(n, eps), k)


# ---------------------------------------------------------------------------
# transform / encode


def test_transform_n2_examples():
    assert np.array_equal(polar_transform([0, 0]), [0, 0])
    assert np.array_equal(polar_transform([1, 1]), [0, 1])
    assert np.array_equal(polar_transform([1, 0]), [1, 0])


@pytest.mark.parametrize("n", [2, 4, 8])
def test_transform_matches_matrix_oracle_exhaustive(n):
    for u_int in range(2 ** n):
        u = np.array([(u_int >> i) & 1 for i in range(n)], dtype=np.uint8)
        x = polar_transform(u)
        assert np.array_equal(x, transform_oracle(u))
        assert np.array_equal(polar_transform(x), u)  # self-inverse


def test_transform_matches_matrix_oracle_random():
    rng = np.random.default_rng(0)
    for n in (16, 64, 256):
        for _ in range(20):
            u = rng.integers(0, 2, n).astype(np.uint8)
            assert np.array_equal(polar_transform(u), transform_oracle(u))


def test_transform_rejects_non_power_of_two():
    with pytest.raises(ValueError):
        polar_transform([0, 1, 0])


def test_encode_all_zero_and_full_rate():
    spec = bec_spec(8, 4)
    assert np.all(polar_encode(spec, np.zeros(4, dtype=int)) == 0)
    full = PolarCodeSpec.from_info_positions(8, range(8))
    rng = np.random.default_rng(1)
    info = rng.integers(0, 2, 8).astype(np.uint8)
    assert np.array_equal(polar_encode(full, info), polar_transform(info))


def test_encode_n4_matrix_oracle():
    spec = PolarCodeSpec.from_info_positions(4, [2, 3])
    cw = polar_encode(spec, [1, 0])
    u = np.array([0, 0, 1, 0], dtype=np.uint8)
    assert np.array_equal(cw, transform_oracle(u))


def test_encode_length_mismatch():
    spec = bec_spec(8, 4)
    with pytest.raises(ValueError):
        polar_encode(spec, [1, 0])


def test_spec_validation():
    with pytest.raises(ValueError):
        PolarCodeSpec.from_info_positions(6, [0, 1])
    with pytest.raises(ValueError):
        PolarCodeSpec(n=4, k=2, frozen_mask=np.array([1, 1, 1, 0], np.uint8),
                      info_positions=np.array([2, 3]))


# ---------------------------------------------------------------------------
# SC decoding


def test_noiseless_round_trip_many_sizes():
    rng = np.random.default_rng(2)
    cases = 0
    for n in (2, 4, 8, 16, 32, 64, 128, 256, 512, 1024):
        for _ in range(12):
            k = int(rng.integers(1, n + 1))
            spec = PolarCodeSpec.from_info_positions(
                n, np.sort(rng.choice(n, k, replace=False)))
            info = rng.integers(0, 2, k).astype(np.uint8)
            llr = np.where(polar_encode(spec, info) == 0, LLR_MAX, -LLR_MAX)
            got, _, _ = sc_decode(spec, llr)
            assert np.array_equal(got, info), (n, k)
            cases += 1
    assert cases == 120


def test_n2_sc_equals_map():
    spec = PolarCodeSpec.from_info_positions(2, [1])
    rng = np.random.default_rng(3)
    for _ in range(300):
        llr = rng.normal(size=2) * 5
        got, dec_llrs, _ = sc_decode(spec, llr)
        assert got[0] == (0 if llr[0] + llr[1] >= 0 else 1)


def test_all_zero_llrs_decide_zero():
    spec = bec_spec(16, 9)
    got, _, _ = sc_decode(spec, np.zeros(16))
    assert np.all(got == 0)


def test_forced_all_bits_recovers_truth_under_noise():
    rng = np.random.default_rng(4)
    spec = bec_spec(32, 16)
    ch = ChannelParams(kind="awgn", ebn0_db=-4.0, rate=0.5, seed=10)
    for s in range(20):
        info = rng.integers(0, 2, 16).astype(np.uint8)
        llr = transmit(ch, polar_encode(spec, info), stream=s)
        forced = {int(p): int(b) for p, b in zip(spec.info_positions, info)}
        got, _, _ = sc_decode(spec, llr, forced=forced)
        assert np.array_equal(got, info)


def test_nonfinite_llr_rejected():
    spec = bec_spec(8, 4)
    llr = np.zeros(8)
    llr[0] = np.inf
    with pytest.raises(ValueError):
        sc_decode(spec, llr)


# ---------------------------------------------------------------------------
# span decoding / resume


def test_span_equals_one_shot():
    rng = np.random.default_rng(5)
    spec = bec_spec(64, 32)
    for _ in range(40):
        llr = rng.normal(size=64) * 3
        b1, l1, _ = sc_decode(spec, llr)
        st = ScState.begin(spec, llr)
        bs, ls = [], []
        for _ in range(8):
            b, l, st = sc_decode_span(st, 4)
            bs.append(b)
            ls.append(l)
        assert np.array_equal(np.concatenate(bs), b1)
        assert np.array_equal(np.concatenate(ls), l1)  # LLR-for-LLR


def test_span_single_call_equals_one_shot():
    rng = np.random.default_rng(6)
    spec = bec_spec(32, 12)
    llr = rng.normal(size=32) * 2
    b1, l1, _ = sc_decode(spec, llr)
    b2, l2, _ = sc_decode_span(ScState.begin(spec, llr), 12)
    assert np.array_equal(b1, b2) and np.array_equal(l1, l2)


def test_span_overrun_raises():
    spec = bec_spec(16, 6)
    st = ScState.begin(spec, np.zeros(16))
    sc_decode_span(st, 4)
    with pytest.raises(ValueError):
        sc_decode_span(st, 3)


def test_full_block_span_undo_log_capacity():
    # a single span over a whole n=512 block logs ~n*log2(n) writes;
    # the undo log must hold them and rewind/replay must stay exact
    rng = np.random.default_rng(20)
    spec = PolarCodeSpec.from_info_positions(512, range(512))
    llr = rng.normal(size=512) * 2
    st = ScState.begin(spec, llr)
    b, l, st = sc_decode_span(st, 512)
    b1, l1, _ = sc_decode(spec, llr)
    assert np.array_equal(b, b1) and np.array_equal(l, l1)
    # half-block span, resume with every span bit forced, then finish:
    # downstream must match a genie run forcing the same 256 bits
    st = ScState.begin(spec, llr)
    b, _, st = sc_decode_span(st, 256)
    flip = b.copy()
    flip[0] ^= 1
    resume_with(st, flip)
    b2, _, st = sc_decode_span(st, 256)
    forced = {int(p): int(x) for p, x in zip(spec.info_positions[:256], flip)}
    gb, _, _ = sc_decode(spec, llr, forced=forced)
    assert np.array_equal(b2, gb[256:])


def test_symbol_paths_with_wide_span():
    # info bits far apart make one DFS path traverse most of the block
    rng = np.random.default_rng(21)
    spec = PolarCodeSpec.from_info_positions(256, [0, 255])
    llr = rng.normal(size=256) * 2
    st = ScState.begin(spec, llr)
    paths = sc_symbol_paths(st, 2)
    assert abs(paths.probs.sum() - 1.0) < 1e-9
    assert paths.span_end == 256


def test_resume_with_noop_when_equal():
    rng = np.random.default_rng(7)
    spec = bec_spec(16, 8)
    llr = rng.normal(size=16)
    st = ScState.begin(spec, llr)
    b, _, _ = sc_decode_span(st, 4)
    lam = st.lam.copy()
    bits = st.bits.copy()
    resume_with(st, b)
    assert np.array_equal(st.lam, lam) and np.array_equal(st.bits, bits)


def test_resume_with_matches_forced_genie_run():
    rng = np.random.default_rng(8)
    for n, k, t in ((4, 2, 1), (16, 8, 4), (64, 32, 4)):
        spec = bec_spec(n, k)
        for _ in range(40):
            llr = rng.normal(size=n) * 2
            st = ScState.begin(spec, llr)
            b, _, st = sc_decode_span(st, t)
            flip = b.copy()
            flip[rng.integers(0, t)] ^= 1
            resume_with(st, flip)
            b2, l2, st = sc_decode_span(st, k - t)
            forced = {int(p): int(x)
                      for p, x in zip(spec.info_positions[:t], flip)}
            gb, gl, _ = sc_decode(spec, llr, forced=forced)
            assert np.array_equal(b2, gb[t:])
            assert np.array_equal(l2, gl[t:])


def test_resume_with_idempotent():
    rng = np.random.default_rng(9)
    spec = bec_spec(16, 8)
    llr = rng.normal(size=16)
    st = ScState.begin(spec, llr)
    b, _, st = sc_decode_span(st, 4)
    flip = b ^ np.array([1, 0, 0, 1], dtype=np.uint8)
    resume_with(st, flip)
    snap = (st.lam.copy(), st.bits.copy(), st.dec.copy())
    resume_with(st, flip)
    assert np.array_equal(st.lam, snap[0])
    assert np.array_equal(st.bits, snap[1])
    assert np.array_equal(st.dec, snap[2])


def test_resume_length_mismatch():
    spec = bec_spec(16, 8)
    st = ScState.begin(spec, np.zeros(16))
    sc_decode_span(st, 4)
    with pytest.raises(ValueError):
        resume_with(st, [0, 1])


# ---------------------------------------------------------------------------
# symbol paths


def test_symbol_paths_noiseless_mass_on_truth():
    rng = np.random.default_rng(10)
    spec = bec_spec(16, 8)
    info = rng.integers(0, 2, 8).astype(np.uint8)
    llr = np.where(polar_encode(spec, info) == 0, LLR_MAX, -LLR_MAX)
    st = ScState.begin(spec, llr)
    paths = sc_symbol_paths(st, 4)
    true_sym = int((info[:4] << np.arange(4)).sum())
    assert abs(paths.probs.sum() - 1.0) < 1e-9
    assert paths.probs[true_sym] > 1 - 1e-9
    st = paths.select(true_sym)
    b, _, _ = sc_decode_span(st, 4)
    assert np.array_equal(b, info[4:])


def test_symbol_paths_t1_logistic():
    rng = np.random.default_rng(11)
    spec = PolarCodeSpec.from_info_positions(2, [1])
    for _ in range(50):
        llr = rng.normal(size=2) * 3
        paths = sc_symbol_paths(ScState.begin(spec, llr), 1)
        _, dec_llrs, _ = sc_decode(spec, llr)
        l = dec_llrs[0]
        assert abs(paths.probs[0] - 1.0 / (1.0 + exp(-l))) < 1e-12
        assert abs(paths.probs[1] - 1.0 / (1.0 + exp(l))) < 1e-12


def test_symbol_paths_match_forced_decode_oracle():
    # independent oracle: per pattern, force the span bits in a fresh
    # decode and multiply the per-position decision probabilities
    rng = np.random.default_rng(12)
    spec = bec_spec(16, 8)
    for _ in range(30):
        llr = rng.normal(size=16) * 2
        st = ScState.begin(spec, llr)
        paths = sc_symbol_paths(st, 2)
        start, end = st.pos, paths.span_end
        oracle = np.zeros(4)
        for s in range(4):
            st2 = ScState.begin(spec, llr)
            info2 = spec.info_positions[:2]
            st2._fmask[info2] = 1
            st2._fbits[info2] = [(s >> d) & 1 for d in range(2)]
            out = st2._decode_to(end, logged=False)
            lp = 0.0
            for p in range(start, end):
                x = out[p] if st2.dec[p] == 0 else -out[p]
                lp += -log1p(exp(-x))
            oracle[s] = exp(lp)
        oracle /= oracle.sum()
        assert np.allclose(oracle, paths.probs, atol=1e-9)


def test_symbol_paths_argmax_equals_exhaustive_best_path():
    rng = np.random.default_rng(13)
    spec = bec_spec(8, 4)
    for _ in range(100):
        llr = rng.normal(size=8) * 2
        st = ScState.begin(spec, llr)
        paths = sc_symbol_paths(st, 2)
        assert 0 <= int(np.argmax(paths.probs)) < 4
        # greedy SC decisions coincide with argmax whenever the greedy
        # path is the most probable path
        b, _, _ = sc_decode_span(ScState.begin(spec, llr), 2)
        greedy = int(b[0]) | (int(b[1]) << 1)
        if greedy == int(np.argmax(paths.probs)):
            continue
        assert paths.probs[greedy] <= paths.probs[int(np.argmax(paths.probs))]


def test_symbol_paths_insufficient_bits():
    spec = bec_spec(8, 2)
    st = ScState.begin(spec, np.zeros(8))
    with pytest.raises(ValueError):
        sc_symbol_paths(st, 3)


# ---------------------------------------------------------------------------
# bit-channel estimation


def test_bec_hand_values():
    assert np.allclose(estimate_bitchannels_bec(2, 0.5), [0.75, 0.25])
    assert np.allclose(estimate_bitchannels_bec(4, 0.5),
                       [0.9375, 0.5625, 0.4375, 0.0625])
    assert np.all(estimate_bitchannels_bec(8, 0.0) == 0)
    assert np.all(estimate_bitchannels_bec(8, 1.0) == 1)


def test_genie_mc_zero_noise():
    ch = ChannelParams(kind="awgn", ebn0_db=40.0, rate=1.0, seed=1)
    assert np.all(estimate_bitchannels_mc(16, ch, 200, seed=1) == 0)


def test_genie_mc_reproducible():
    ch = ChannelParams(kind="awgn", ebn0_db=1.0, rate=0.5, seed=2)
    a = estimate_bitchannels_mc(16, ch, 3000, seed=5)
    b = estimate_bitchannels_mc(16, ch, 3000, seed=5)
    assert np.array_equal(a, b)
    c = estimate_bitchannels_mc(16, ch, 3000, seed=6)
    assert not np.array_equal(a, c)


def test_genie_mc_matches_bec_recursion():
    z = estimate_bitchannels_bec(8, 0.5)
    ch = ChannelParams(kind="bec", eps=0.5, seed=3)
    trials = 30000
    phat = estimate_bitchannels_mc(8, ch, trials, seed=3)
    sigma = np.sqrt(z * (1 - z) / trials)
    assert np.all(np.abs(phat - z) <= 3 * sigma + 1e-12)


# ---------------------------------------------------------------------------
# frozen-set selection


def test_select_frozen_full_rate():
    spec = select_frozen(np.linspace(0, 1, 16), 16)
    assert spec.k == 16 and not spec.frozen_mask.any()


def test_select_frozen_example():
    spec = select_frozen([0.9, 0.1, 0.5, 0.2], 2)
    assert list(spec.info_positions) == [1, 3]


def test_select_frozen_tiebreak_smaller_index():
    spec = select_frozen([0.5, 0.5, 0.5, 0.1], 2)
    assert list(spec.info_positions) == [0, 3]


def test_select_frozen_matches_bruteforce_bec():
    z = estimate_bitchannels_bec(8, 0.5)
    spec = select_frozen(z, 4)
    best = sorted(sorted(range(8), key=lambda i: (z[i], i))[:4])
    assert list(spec.info_positions) == best


def test_select_frozen_k_range():
    with pytest.raises(ValueError):
        select_frozen(np.zeros(8), 0)
    with pytest.raises(ValueError):
        select_frozen(np.zeros(8), 9)
