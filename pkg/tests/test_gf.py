import numpy as np
import pytest

from ccft.errors import (DivisionByZero, NonPrimitivePolynomial,
                         OrderUnavailable)
from ccft.gf import (element_of_order, make_field, multiplicative_order,
                     normal_basis)
from ccft.gf2 import poly_mod, poly_mul


def test_table_construction_gf16():
    ctx = make_field(4)
    assert ctx.q == 16
    assert ctx.exp[0] == 1
    # exp and log invert each other on nonzero elements
    for a in range(1, 16):
        assert ctx.exp[ctx.log[a]] == a
    # alpha generates the whole multiplicative group
    assert sorted(int(ctx.exp[i]) for i in range(15)) == list(range(1, 16))


def test_mul_matches_carryless_reduction_exhaustive():
    ctx = make_field(4)
    for a in range(16):
        for b in range(16):
            assert ctx.mul(a, b) == poly_mod(poly_mul(a, b), ctx.prim_poly)


@pytest.mark.parametrize("m", [8, 12])
def test_mul_matches_carryless_reduction_random(m):
    ctx = make_field(m)
    rng = np.random.default_rng(m)
    for _ in range(2000):
        a = int(rng.integers(0, ctx.q))
        b = int(rng.integers(0, ctx.q))
        assert ctx.mul(a, b) == poly_mod(poly_mul(a, b), ctx.prim_poly)


def test_inverse_and_division():
    ctx = make_field(8)
    for a in range(1, 256):
        assert ctx.mul(a, ctx.inv(a)) == 1
    assert ctx.div(ctx.mul(7, 19), 19) == 7
    with pytest.raises(DivisionByZero):
        ctx.inv(0)
    with pytest.raises(DivisionByZero):
        ctx.div(5, 0)


def test_vector_ops_agree_with_scalar():
    ctx = make_field(8)
    rng = np.random.default_rng(0)
    a = rng.integers(0, 256, 64).astype(np.int64)
    b = rng.integers(0, 256, 64).astype(np.int64)
    prod = ctx.vmul(a, b)
    for i in range(64):
        assert int(prod[i]) == ctx.mul(int(a[i]), int(b[i]))
    nz = a[a != 0]
    invs = ctx.vinv(nz)
    for i in range(len(nz)):
        assert int(invs[i]) == ctx.inv(int(nz[i]))


def test_non_primitive_polynomial_rejected():
    # x^4 + x^3 + x^2 + x + 1 is irreducible but its root has order 5
    with pytest.raises(NonPrimitivePolynomial):
        make_field(4, 0b11111)
    # reducible polynomial
    with pytest.raises(NonPrimitivePolynomial):
        make_field(4, 0b10101)


def test_field_size_bounds():
    with pytest.raises(ValueError):
        make_field(1)
    with pytest.raises(ValueError):
        make_field(17)


def test_element_of_order():
    ctx = make_field(4)
    g = element_of_order(ctx, 5)
    assert g == ctx.pow(ctx.alpha, 3)
    assert multiplicative_order(ctx, g) == 5
    with pytest.raises(OrderUnavailable):
        element_of_order(ctx, 7)


def test_element_of_order_full_length():
    ctx = make_field(8)
    g = element_of_order(ctx, 255)
    assert g == ctx.alpha
    assert multiplicative_order(ctx, g) == 255


@pytest.mark.parametrize("m,d", [(4, 2), (4, 4), (12, 6), (12, 12)])
def test_normal_basis_conjugates_independent(m, d):
    from ccft.gf2 import gf2_rank
    ctx = make_field(m)
    beta = normal_basis(ctx, d)
    conjugates = []
    x = beta
    for _ in range(d):
        conjugates.append(x)
        x = ctx.mul(x, x)
    assert multiplicative_order(ctx, beta) != 1
    assert gf2_rank(conjugates) == d
    # all conjugates live in the GF(2^d) subfield
    for c in conjugates:
        assert ctx.pow(c, (1 << d) - 1) == 1
