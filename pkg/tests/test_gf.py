import numpy as np
import pytest

from rspolar.gf import DEFAULT_PRIMITIVE_POLYS, GFContext, mul_nolut


def brute_force_order(t, poly):
    """Multiplicative order of x by repeated table-free multiplication."""
    x = mul_nolut(1, 2, t, poly)
    order = 1
    while x != 1:
        x = mul_nolut(x, 2, t, poly)
        order += 1
        if order > (1 << t):
            return -1
    return order


def test_gf16_default_is_primitive():
    ctx = GFContext(4, 0x13)
    assert ctx.q == 16
    # powers of x cover all 15 nonzero elements
    seen = {ctx.alpha_pow(i) for i in range(15)}
    assert seen == set(range(1, 16))
    assert brute_force_order(4, 0x13) == 15


def test_non_primitive_rejected():
    # x^4+x^3+x^2+x+1 is irreducible but x has order 5
    assert brute_force_order(4, 0x1F) == 5
    with pytest.raises(ValueError):
        GFContext(4, 0x1F)


def test_reducible_rejected():
    with pytest.raises(ValueError):
        GFContext(4, 0x11)  # x^4 + 1 = (x+1)^4


def test_gf4():
    ctx = GFContext(2, 0x7)
    assert ctx.q == 4
    assert ctx.mul(2, 2) == 3  # x*x = x+1


def test_wrong_degree_rejected():
    with pytest.raises(ValueError):
        GFContext(4, 0x7)
    with pytest.raises(ValueError):
        GFContext(4, 0x3F)


@pytest.mark.parametrize("t", sorted(DEFAULT_PRIMITIVE_POLYS))
def test_default_polys_build(t):
    ctx = GFContext(t)
    assert ctx.q == 1 << t
    a = ctx.alpha_pow(1)
    assert ctx.mul(a, ctx.inv(a)) == 1


def test_mul_examples_gf16():
    ctx = GFContext(4, 0x13)
    for a in range(16):
        assert ctx.mul(1, a) == a
        assert ctx.mul(0, a) == 0
    assert ctx.mul(2, 8) == 3  # x * x^3 = x^4 = x + 1


def test_mul_matches_nolut_exhaustive_gf16():
    ctx = GFContext(4, 0x13)
    for a in range(16):
        for b in range(16):
            assert ctx.mul(a, b) == mul_nolut(a, b, 4, 0x13)


def test_mul_matches_nolut_random_gf256():
    ctx = GFContext(8)
    rng = np.random.default_rng(0)
    for a, b in rng.integers(0, 256, (2000, 2)):
        assert ctx.mul(int(a), int(b)) == mul_nolut(int(a), int(b), 8, ctx.prim_poly)


def test_field_axioms_exhaustive_gf16():
    ctx = GFContext(4, 0x13)
    els = range(16)
    for a in els:
        for b in els:
            assert ctx.mul(a, b) == ctx.mul(b, a)
            for c in els:
                assert ctx.mul(ctx.mul(a, b), c) == ctx.mul(a, ctx.mul(b, c))
                assert ctx.mul(a, b ^ c) == ctx.mul(a, b) ^ ctx.mul(a, c)


def test_inverse():
    ctx = GFContext(4, 0x13)
    assert ctx.inv(1) == 1
    assert ctx.inv(2) == 9
    for a in range(1, 16):
        assert ctx.mul(a, ctx.inv(a)) == 1
        # exhaustive-search oracle
        assert ctx.inv(a) == next(b for b in range(1, 16) if ctx.mul(a, b) == 1)
    with pytest.raises(ZeroDivisionError):
        ctx.inv(0)


def test_order_of_units():
    ctx = GFContext(4, 0x13)
    for a in range(1, 16):
        assert ctx.pow(a, 15) == 1


def test_binary_image_bijection_and_linearity():
    ctx = GFContext(4, 0x13)
    seen = set()
    for a in range(16):
        bits = ctx.to_bits(a)
        assert len(bits) == 4
        assert ctx.from_bits(bits) == a
        seen.add(tuple(bits))
    assert len(seen) == 16
    for a in range(16):
        for b in range(16):
            assert np.array_equal(ctx.to_bits(a ^ b),
                                  ctx.to_bits(a) ^ ctx.to_bits(b))


def test_little_endian_image():
    ctx = GFContext(4, 0x13)
    assert list(ctx.to_bits(1)) == [1, 0, 0, 0]  # bit 0 = constant term
    assert list(ctx.to_bits(8)) == [0, 0, 0, 1]
