import numpy as np
import pytest

from ccft.conv import (MAX_LENGTH, direct_conv, linear_conv_matrices,
                       short_conv)
from ccft.errors import UnsupportedLength
from ccft.gf import make_field
from ccft.gf2 import xor_matvec


def ref_cyclic(ctx, a, b):
    s = len(a)
    out = np.zeros(s, np.int64)
    for i in range(s):
        for j in range(s):
            out[(i + j) % s] ^= ctx.mul(int(a[i]), int(b[j]))
    return out


def run_alg(ctx, alg, a, b):
    pa = xor_matvec(alg.pre_a, a, ctx.m)
    pb = xor_matvec(alg.pre_b, b, ctx.m)
    return xor_matvec(alg.post, ctx.vmul(pa, pb), ctx.m)


@pytest.mark.parametrize("s", list(range(1, MAX_LENGTH + 1)))
def test_short_conv_matches_direct(s):
    ctx = make_field(8)
    alg = short_conv(s)
    rng = np.random.default_rng(s)
    for _ in range(20):
        a = rng.integers(0, 256, s).astype(np.int64)
        b = rng.integers(0, 256, s).astype(np.int64)
        assert np.array_equal(run_alg(ctx, alg, a, b), ref_cyclic(ctx, a, b))


def test_direct_fallback_matches():
    ctx = make_field(4)
    alg = direct_conv(7)
    assert alg.mult_count == 49
    rng = np.random.default_rng(7)
    a = rng.integers(0, 16, 7).astype(np.int64)
    b = rng.integers(0, 16, 7).astype(np.int64)
    assert np.array_equal(run_alg(ctx, alg, a, b), ref_cyclic(ctx, a, b))


def test_known_multiplication_counts():
    # classical counts for the structured algorithms
    expected = {1: 1, 2: 3, 3: 4, 4: 9, 5: 10, 6: 12}
    for s, cnt in expected.items():
        assert short_conv(s).mult_count == cnt


def test_nesting_count_is_product():
    assert short_conv(6).mult_count == \
        short_conv(2).mult_count * short_conv(3).mult_count


def test_length_cap():
    with pytest.raises(UnsupportedLength):
        short_conv(MAX_LENGTH + 1)


@pytest.mark.parametrize("d", [1, 2, 3, 4, 5, 8])
def test_linear_conv(d):
    ctx = make_field(8)
    pre, post = linear_conv_matrices(d)
    rng = np.random.default_rng(d)
    a = rng.integers(0, 256, d).astype(np.int64)
    b = rng.integers(0, 256, d).astype(np.int64)
    pa = xor_matvec(pre, a, 8)
    pb = xor_matvec(pre, b, 8)
    got = xor_matvec(post, ctx.vmul(pa, pb), 8)
    ref = np.zeros(2 * d - 1, np.int64)
    for i in range(d):
        for j in range(d):
            ref[i + j] ^= ctx.mul(int(a[i]), int(b[j]))
    assert np.array_equal(got, ref)


def test_matrices_are_binary():
    for s in range(1, MAX_LENGTH + 1):
        alg = short_conv(s)
        for mat in (alg.pre_a, alg.pre_b, alg.post):
            assert set(np.unique(mat)) <= {0, 1}
