"""Bilinear short cyclic-convolution algorithms safe in characteristic 2.

A ShortConvAlg computes the length-s circular convolution of u and v as
post @ ((pre_a @ u) * (pre_b @ v)) with all three matrices binary, so the
same algorithm works over GF(2^m) for every m.

Construction routes:
  * odd s: CRT on the distinct irreducible factors of x^s + 1 over GF(2),
    with each modular product done by generalized Karatsuba;
  * s = 2^a: full linear convolution (Karatsuba) wrapped around;
  * other even s: Agarwal-Cooley nesting of the 2^a and odd parts;
  * any s: a direct s^2-multiplication fallback.
The structured algorithm is used when it needs fewer multiplications than
the direct one (always, in practice, for s >= 2).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import gf2
from .errors import UnsupportedLength

MAX_LENGTH = 12


@dataclass(frozen=True)
class ShortConvAlg:
    length: int
    pre_a: np.ndarray   # M x s binary
    pre_b: np.ndarray   # M x s binary
    post: np.ndarray    # s x M binary

    @property
    def mult_count(self) -> int:
        return self.pre_a.shape[0]


@lru_cache(maxsize=None)
def linear_conv_matrices(d: int) -> tuple[np.ndarray, np.ndarray]:
    """Bilinear algorithm for the full product of two length-d coefficient
    vectors (output length 2d-1).  Returns (pre, post); both operands use
    the same pre matrix.  Recursive two-way Karatsuba with a pairwise
    base case, all reconstruction coefficients in {0,1}."""
    if d == 1:
        return np.ones((1, 1), np.uint8), np.ones((1, 1), np.uint8)
    if d <= 3:
        # pairwise products u_i v_i and (u_i+u_j)(v_i+v_j)
        rows = []
        idx = {}
        for i in range(d):
            r = np.zeros(d, np.uint8)
            r[i] = 1
            idx[(i, i)] = len(rows)
            rows.append(r)
        for i in range(d):
            for j in range(i + 1, d):
                r = np.zeros(d, np.uint8)
                r[i] = r[j] = 1
                idx[(i, j)] = len(rows)
                rows.append(r)
        pre = np.array(rows, np.uint8)
        post = np.zeros((2 * d - 1, len(rows)), np.uint8)
        for k in range(2 * d - 1):
            for i in range(max(0, k - d + 1), min(d, k + 1)):
                j = k - i
                if i == j:
                    post[k, idx[(i, i)]] ^= 1
                elif i < j:
                    post[k, idx[(i, j)]] ^= 1
                    post[k, idx[(i, i)]] ^= 1
                    post[k, idx[(j, j)]] ^= 1
        return pre, post
    h = (d + 1) // 2
    lo_pre, lo_post = linear_conv_matrices(h)
    hi_pre, hi_post = linear_conv_matrices(d - h)
    mid_pre, mid_post = linear_conv_matrices(h)
    m_lo, m_hi, m_mid = len(lo_pre), len(hi_pre), len(mid_pre)
    pre = np.zeros((m_lo + m_hi + m_mid, d), np.uint8)
    pre[:m_lo, :h] = lo_pre
    pre[m_lo:m_lo + m_hi, h:] = hi_pre
    pre[m_lo + m_hi:, :h] = mid_pre
    pre[m_lo + m_hi:, h:] ^= mid_pre[:, :d - h]
    out = 2 * d - 1
    post = np.zeros((out, m_lo + m_hi + m_mid), np.uint8)
    # w = lo + x^h (mid + lo + hi) + x^(2h) hi  (characteristic 2)
    post[:2 * h - 1, :m_lo] ^= lo_post
    post[h:3 * h - 1, :m_lo] ^= lo_post
    hi_len = 2 * (d - h) - 1
    post[2 * h:2 * h + hi_len, m_lo:m_lo + m_hi] ^= hi_post
    post[h:h + hi_len, m_lo:m_lo + m_hi] ^= hi_post
    post[h:3 * h - 1, m_lo + m_hi:] ^= mid_post
    return pre, post


def _cyclic_odd(s: int) -> ShortConvAlg:
    factors = gf2.factor_xn_plus_1(s)
    pre_blocks = []
    post_parts = []  # (degree, reduced Karatsuba post) per factor
    for f in factors:
        d = gf2.poly_degree(f)
        reduce_in = gf2.poly_reduce_matrix(s, f)
        kpre, kpost = linear_conv_matrices(d)
        reduce_out = gf2.poly_reduce_matrix(2 * d - 1, f)
        pre_blocks.append(gf2.gf2_matmul(kpre, reduce_in))
        post_parts.append((f, d, gf2.gf2_matmul(reduce_out, kpost)))
    pre = np.concatenate(pre_blocks, axis=0)
    total = (1 << s) | 1
    m = pre.shape[0]
    post = np.zeros((s, m), np.uint8)
    off = 0
    for f, d, post_f in post_parts:
        big_m = gf2.poly_divmod(total, f)[0]
        g, u, _ = gf2.poly_egcd(gf2.poly_mod(big_m, f), f)
        assert g == 1
        idem = gf2.poly_mod(gf2.poly_mul(big_m, u), total)
        mf = post_f.shape[1]
        for j in range(d):
            term = gf2.poly_mod(gf2.poly_mul(idem, 1 << j), total)
            for k in range(s):
                if (term >> k) & 1:
                    post[k, off:off + mf] ^= post_f[j]
        off += mf
    return ShortConvAlg(s, pre, pre, post)


def _cyclic_pow2(s: int) -> ShortConvAlg:
    kpre, kpost = linear_conv_matrices(s)
    post = np.zeros((s, kpre.shape[0]), np.uint8)
    for k in range(2 * s - 1):
        post[k % s] ^= kpost[k]
    return ShortConvAlg(s, kpre, kpre, post)


def _agarwal_cooley(s1: int, s2: int) -> ShortConvAlg:
    """Nest cyclic algorithms of coprime lengths s1, s2 into one of s1*s2."""
    a1 = short_conv(s1)
    a2 = short_conv(s2)
    s = s1 * s2
    m1, m2 = a1.mult_count, a2.mult_count

    def nest(p1: np.ndarray, p2: np.ndarray) -> np.ndarray:
        out = np.zeros((m1 * m2, s), np.uint8)
        i1 = np.arange(s) % s1
        i2 = np.arange(s) % s2
        for r1 in range(m1):
            for r2 in range(m2):
                out[r1 * m2 + r2] = p1[r1, i1] & p2[r2, i2]
        return out

    pre_a = nest(a1.pre_a, a2.pre_a)
    pre_b = nest(a1.pre_b, a2.pre_b)
    post = np.zeros((s, m1 * m2), np.uint8)
    for k in range(s):
        rows = np.outer(a1.post[k % s1], a2.post[k % s2]) & 1
        post[k] = rows.reshape(-1)
    return ShortConvAlg(s, pre_a, pre_b, post)


def direct_conv(s: int) -> ShortConvAlg:
    """Fallback: all s^2 cross products, no structure."""
    pre_a = np.zeros((s * s, s), np.uint8)
    pre_b = np.zeros((s * s, s), np.uint8)
    post = np.zeros((s, s * s), np.uint8)
    for i in range(s):
        for j in range(s):
            pre_a[i * s + j, i] = 1
            pre_b[i * s + j, j] = 1
            post[(i + j) % s, i * s + j] = 1
    return ShortConvAlg(s, pre_a, pre_b, post)


@lru_cache(maxsize=None)
def short_conv(length: int) -> ShortConvAlg:
    """Verified bilinear cyclic convolution algorithm of the given length."""
    if not 1 <= length <= MAX_LENGTH:
        raise UnsupportedLength(f"cyclic convolution length {length} unsupported")
    if length == 1:
        one = np.ones((1, 1), np.uint8)
        return ShortConvAlg(1, one, one.copy(), one.copy())
    if length % 2 == 1:
        alg = _cyclic_odd(length)
    else:
        odd = length
        two = 1
        while odd % 2 == 0:
            odd //= 2
            two *= 2
        alg = _cyclic_pow2(length) if odd == 1 else _agarwal_cooley(two, odd)
    direct = direct_conv(length)
    return alg if alg.mult_count <= direct.mult_count else direct
