import numpy as np
import pytest

from rspolar.gf import GFContext
from rspolar.rs import RsCodeSpec, rs_decode, rs_encode, rs_gmd_list


@pytest.fixture(scope="module")
def gf16():
    return GFContext(4, 0x13)


@pytest.fixture(scope="module")
def rs15_2(gf16):
    return RsCodeSpec(gf16, 15, 2)


def poly_eval(ctx, coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = ctx.mul(acc, x) ^ int(c)
    return acc


def syndromes(spec, word):
    return [poly_eval(spec.ctx, word, spec.ctx.alpha_pow(i))
            for i in range(1, 2 * spec.tau + 1)]


def poly_divides(ctx, g, c):
    """Long division of c by g over GF(2^t); True iff remainder is zero."""
    rem = list(int(x) for x in c)
    dg = len(g) - 1
    lead_inv = ctx.inv(int(g[dg]))
    for i in range(len(rem) - 1, dg - 1, -1):
        if rem[i] == 0:
            continue
        f = ctx.mul(rem[i], lead_inv)
        for j in range(dg + 1):
            rem[i - dg + j] ^= ctx.mul(f, int(g[j]))
    return all(x == 0 for x in rem)


def test_spec_validation(gf16):
    with pytest.raises(ValueError):
        RsCodeSpec(gf16, 16, 2)  # m > q-1
    with pytest.raises(ValueError):
        RsCodeSpec(gf16, 15, 8)  # tau > (m-1)/2
    spec = RsCodeSpec(gf16, 15, 2)
    assert spec.kappa == 11 and spec.d == 5


def test_generator_roots(rs15_2):
    g = rs15_2.generator
    assert len(g) == 5 and g[-1] == 1
    for i in range(1, 5):
        assert poly_eval(rs15_2.ctx, g, rs15_2.ctx.alpha_pow(i)) == 0
    # alpha^0 is not a root
    assert poly_eval(rs15_2.ctx, g, 1) != 0


def test_encode_systematic_and_valid(rs15_2):
    rng = np.random.default_rng(1)
    assert np.all(rs_encode(rs15_2, np.zeros(11, dtype=int)) == 0)
    for _ in range(50):
        msg = rng.integers(0, 16, 11)
        cw = rs_encode(rs15_2, msg)
        assert np.array_equal(cw[:11], msg)
        assert all(s == 0 for s in syndromes(rs15_2, cw))
        assert poly_divides(rs15_2.ctx, rs15_2.generator, cw)


def test_encode_min_weight(rs15_2):
    # MDS: d = 2 tau + 1 = 5, so any nonzero codeword has weight >= 5
    rng = np.random.default_rng(2)
    for _ in range(300):
        msg = rng.integers(0, 16, 11)
        if not msg.any():
            continue
        cw = rs_encode(rs15_2, msg)
        assert int((cw != 0).sum()) >= 5


def test_encode_length_mismatch(rs15_2):
    with pytest.raises(ValueError):
        rs_encode(rs15_2, np.zeros(10, dtype=int))


def test_decode_clean(rs15_2):
    rng = np.random.default_rng(3)
    cw = rs_encode(rs15_2, rng.integers(0, 16, 11))
    res = rs_decode(rs15_2, cw)
    assert res.ok and res.corrections == 0
    assert np.array_equal(res.codeword, cw)


def test_decode_weight1_exhaustive(rs15_2):
    rng = np.random.default_rng(4)
    cw = rs_encode(rs15_2, rng.integers(0, 16, 11))
    for p in range(15):
        for v in range(1, 16):
            r = cw.copy()
            r[p] ^= v
            res = rs_decode(rs15_2, r)
            assert res.ok and np.array_equal(res.codeword, cw)
            assert res.corrections == 1


@pytest.mark.parametrize("e,f", [(e, f) for e in range(3) for f in range(5)
                                 if 2 * e + f <= 4])
def test_errors_and_erasures_grid(rs15_2, e, f):
    rng = np.random.default_rng(100 + 10 * e + f)
    for _ in range(400):
        cw = rs_encode(rs15_2, rng.integers(0, 16, 11))
        r = cw.copy()
        pos = rng.choice(15, e + f, replace=False)
        for p in pos[:e]:
            r[p] ^= rng.integers(1, 16)
        for p in pos[e:]:
            r[p] ^= rng.integers(0, 16)  # erased values may be anything
        res = rs_decode(rs15_2, r, erasures=pos[e:])
        assert res.ok and np.array_equal(res.codeword, cw)


def test_decode_beyond_radius_never_invalid(rs15_2):
    # 4 errors exceed the radius: failure or a miscorrection, but any
    # returned word must be a codeword within bounded distance
    rng = np.random.default_rng(5)
    fails = 0
    for _ in range(500):
        cw = rs_encode(rs15_2, rng.integers(0, 16, 11))
        r = cw.copy()
        for p in rng.choice(15, 4, replace=False):
            r[p] ^= rng.integers(1, 16)
        res = rs_decode(rs15_2, r)
        if not res.ok:
            fails += 1
            continue
        assert all(s == 0 for s in syndromes(rs15_2, res.codeword))
        assert int((res.codeword != r).sum()) <= 2
    assert fails > 0


def test_too_many_erasures_raises(rs15_2):
    cw = rs_encode(rs15_2, np.zeros(11, dtype=int))
    with pytest.raises(ValueError):
        rs_decode(rs15_2, cw, erasures=range(5))


def test_pure_erasures_at_limit(rs15_2):
    rng = np.random.default_rng(6)
    for _ in range(200):
        cw = rs_encode(rs15_2, rng.integers(0, 16, 11))
        r = cw.copy()
        pos = rng.choice(15, 4, replace=False)
        for p in pos:
            r[p] = rng.integers(0, 16)
        res = rs_decode(rs15_2, r, erasures=pos)
        assert res.ok and np.array_equal(res.codeword, cw)


def test_tau0_passthrough(gf16):
    spec = RsCodeSpec(gf16, 15, 0)
    rng = np.random.default_rng(7)
    msg = rng.integers(0, 16, 15)
    cw = rs_encode(spec, msg)
    assert np.array_equal(cw, msg)
    res = rs_decode(spec, cw)
    assert res.ok and res.corrections == 0


def test_shortened_code(gf16):
    spec = RsCodeSpec(gf16, 9, 2)
    rng = np.random.default_rng(8)
    for _ in range(200):
        cw = rs_encode(spec, rng.integers(0, 16, 5))
        r = cw.copy()
        for p in rng.choice(9, 2, replace=False):
            r[p] ^= rng.integers(1, 16)
        res = rs_decode(spec, r)
        assert res.ok and np.array_equal(res.codeword, cw)


def test_larger_field():
    ctx = GFContext(8)
    spec = RsCodeSpec(ctx, 255, 8)
    rng = np.random.default_rng(9)
    cw = rs_encode(spec, rng.integers(0, 256, 239))
    r = cw.copy()
    for p in rng.choice(255, 8, replace=False):
        r[p] ^= rng.integers(1, 256)
    res = rs_decode(spec, r)
    assert res.ok and np.array_equal(res.codeword, cw)


# ---------------------------------------------------------------------------
# GMD list decoding


def test_gmd_clean_contains_alpha0(rs15_2):
    rng = np.random.default_rng(10)
    cw = rs_encode(rs15_2, rng.integers(0, 16, 11))
    lst = rs_gmd_list(rs15_2, cw, rng.random(15))
    assert any(np.array_equal(c, cw) and a == 0 for c, a in lst)


def test_gmd_recovers_three_errors_in_unreliable_positions(rs15_2):
    rng = np.random.default_rng(11)
    for _ in range(100):
        cw = rs_encode(rs15_2, rng.integers(0, 16, 11))
        r = cw.copy()
        rels = 0.5 + 0.5 * rng.random(15)
        low = rng.choice(15, 4, replace=False)
        rels[low] = 0.01 * rng.random(4)
        bad = low[:3]
        for p in bad:
            r[p] ^= rng.integers(1, 16)
        lst = rs_gmd_list(rs15_2, r, rels)
        # alpha = 4 erases all four unreliable spots: e=0, f=4 <= d-1
        assert any(np.array_equal(c, cw) for c, a in lst)


def test_gmd_list_size_bound(rs15_2):
    rng = np.random.default_rng(12)
    for _ in range(300):
        word = rng.integers(0, 16, 15)
        lst = rs_gmd_list(rs15_2, word, rng.random(15))
        assert len(lst) <= (rs15_2.d + 1) // 2
        alphas = [a for _, a in lst]
        assert len(set(alphas)) == len(alphas)
        assert all(a in (0, 2, 4) for a in alphas)


def test_gmd_alpha0_equals_plain_decode(rs15_2):
    rng = np.random.default_rng(13)
    for _ in range(200):
        cw = rs_encode(rs15_2, rng.integers(0, 16, 11))
        r = cw.copy()
        for p in rng.choice(15, rng.integers(0, 3), replace=False):
            r[p] ^= rng.integers(1, 16)
        lst = rs_gmd_list(rs15_2, r, rng.random(15))
        plain = rs_decode(rs15_2, r)
        a0 = [c for c, a in lst if a == 0]
        if plain.ok:
            assert len(a0) == 1
            assert np.array_equal(a0[0], plain.codeword)
        else:
            assert not a0


def test_gmd_reliability_tiebreak_by_position(rs15_2):
    # all-equal reliabilities: erasures must hit the lowest positions
    rng = np.random.default_rng(14)
    cw = rs_encode(rs15_2, rng.integers(0, 16, 11))
    r = cw.copy()
    r[0] ^= 3
    r[1] ^= 5
    r[2] ^= 7
    # with uniform reliabilities alpha=4 erases positions 0,1,2,3
    lst = rs_gmd_list(rs15_2, r, np.ones(15))
    assert any(np.array_equal(c, cw) for c, a in lst)


def test_gmd_nonfinite_reliability_rejected(rs15_2):
    cw = rs_encode(rs15_2, np.zeros(11, dtype=int))
    rels = np.ones(15)
    rels[3] = np.nan
    with pytest.raises(ValueError):
        rs_gmd_list(rs15_2, cw, rels)
