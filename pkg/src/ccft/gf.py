"""Arithmetic in GF(2^m) for 2 <= m <= 16.

Elements live in polynomial basis as plain integers below 2^m.  A
FieldContext owns log/antilog tables built from a primitive polynomial and
is immutable after construction, so contexts can be shared freely between
threads.  Scalar operations take and return ints; the v* helpers operate on
numpy arrays elementwise.
"""

from __future__ import annotations

import math

import numpy as np

from . import gf2
from .errors import DivisionByZero, NonPrimitivePolynomial, OrderUnavailable

# Conventional primitive polynomials, one per extension degree.  Only the
# m=4 choice is dictated by upstream material; the rest are the usual
# textbook defaults and can be overridden in make_field.
DEFAULT_PRIMITIVE_POLY = {
    2: 0b111,
    3: 0b1011,
    4: 0b10011,                 # x^4 + x + 1
    5: 0b100101,
    6: 0b1000011,
    7: 0b10001001,
    8: 0b100011101,             # x^8 + x^4 + x^3 + x^2 + 1
    9: 0b1000010001,
    10: 0b10000001001,
    11: 0b100000000101,
    12: 0b1000001010011,        # x^12 + x^6 + x^4 + x + 1
    13: 0b10000000011011,
    14: 0b100010000000011,
    15: 0b1000000000000011,
    16: 0b10001000000001011,
}


class FieldContext:
    """GF(2^m) with log/antilog tables; alpha = 2 (the polynomial x)."""

    def __init__(self, m: int, prim_poly: int):
        self.m = m
        self.prim_poly = prim_poly
        self.q = 1 << m
        order = self.q - 1

        exp = np.zeros(2 * order, dtype=np.int64)
        log = np.zeros(self.q, dtype=np.int64)
        v = 1
        for i in range(order):
            exp[i] = v
            log[v] = i
            v = gf2.poly_mod(v << 1, prim_poly)
        if v != 1 or np.count_nonzero(exp[:order]) != order or len(set(exp[:order].tolist())) != order:
            raise NonPrimitivePolynomial(
                f"x has order < 2^{m}-1 modulo {prim_poly:#x}")
        exp[order:] = exp[:order]  # doubled table: no modulo on log sums
        self.exp = exp
        self.log = log
        self.alpha = 2
        # caches for derived structures (CFFT networks, normal bases)
        self._normal_basis: dict[int, int] = {}
        self._net_cache: dict = {}

    # -- scalar operations ---------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp[self.log[a] + self.log[b]])

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return int(self.exp[self.q - 1 - self.log[a]])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            return 0 if e else 1
        return int(self.exp[(int(self.log[a]) * e) % (self.q - 1)])

    # -- vector operations (numpy arrays of elements) -------------------------

    def vmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a = np.asarray(a)
        b = np.asarray(b)
        out = self.exp[self.log[a] + self.log[b]]
        zero = (a == 0) | (b == 0)
        return np.where(zero, 0, out)

    def vinv(self, a: np.ndarray) -> np.ndarray:
        if np.any(a == 0):
            raise DivisionByZero("inverse of zero")
        return self.exp[(self.q - 1 - self.log[a]) % (self.q - 1)]

    def powers(self, base: int, count: int, start: int = 0) -> np.ndarray:
        """Array [base^start, ..., base^(start+count-1)]."""
        if base == 0:
            raise ValueError("powers of zero")
        lb = int(self.log[base])
        e = (lb * (np.arange(start, start + count, dtype=np.int64))) % (self.q - 1)
        return self.exp[e]

    def __repr__(self) -> str:
        return f"FieldContext(m={self.m}, prim_poly={self.prim_poly:#x})"


def make_field(m: int, prim_poly: int | None = None) -> FieldContext:
    """Build a GF(2^m) context, verifying the polynomial is primitive."""
    if not 2 <= m <= 16:
        raise ValueError(f"extension degree m={m} out of supported range [2, 16]")
    if prim_poly is None:
        prim_poly = DEFAULT_PRIMITIVE_POLY[m]
    if gf2.poly_degree(prim_poly) != m:
        raise ValueError(f"prim_poly {prim_poly:#x} does not have degree {m}")
    return FieldContext(m, prim_poly)


def element_of_order(ctx: FieldContext, n: int) -> int:
    """Deterministic element of multiplicative order n: alpha^((2^m-1)/n)."""
    if n <= 0 or (ctx.q - 1) % n != 0:
        raise OrderUnavailable(f"no element of order {n} in GF(2^{ctx.m})")
    return ctx.pow(ctx.alpha, (ctx.q - 1) // n)


def multiplicative_order(ctx: FieldContext, a: int) -> int:
    if a == 0:
        raise DivisionByZero("zero has no multiplicative order")
    la = int(ctx.log[a])
    return (ctx.q - 1) // math.gcd(ctx.q - 1, la)


def normal_basis(ctx: FieldContext, d: int) -> int:
    """An element beta of the GF(2^d) subfield whose conjugates
    {beta^(2^s)} form a GF(2)-basis of that subfield.  Cached per degree."""
    if ctx.m % d != 0:
        raise ValueError(f"GF(2^{d}) is not a subfield of GF(2^{ctx.m})")
    cached = ctx._normal_basis.get(d)
    if cached is not None:
        return cached
    if d == 1:
        ctx._normal_basis[1] = 1
        return 1
    step = (ctx.q - 1) // ((1 << d) - 1)
    for e in range(1, (1 << d) - 1):
        beta = int(ctx.exp[(e * step) % (ctx.q - 1)])
        conj = []
        x = beta
        for _ in range(d):
            conj.append(x)
            x = ctx.mul(x, x)
        if gf2.gf2_rank(conj) == d:
            ctx._normal_basis[d] = beta
            return beta
    raise RuntimeError(f"no normal element found for GF(2^{d})")  # unreachable
