"""GF(2) polynomial and matrix utilities.

Polynomials over GF(2) are integers whose bits are coefficients (bit i is
the coefficient of x^i).  Binary matrices are numpy uint8 arrays.  Vectors
of GF(2^m) elements are numpy integer arrays; a binary matrix acts on them
by XOR-accumulation.
"""

from __future__ import annotations

import numpy as np


# ---------------------------------------------------------------------------
# polynomials over GF(2)
# ---------------------------------------------------------------------------

def poly_degree(p: int) -> int:
    return p.bit_length() - 1


def poly_mul(a: int, b: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def poly_divmod(a: int, b: int) -> tuple[int, int]:
    if b == 0:
        raise ZeroDivisionError("polynomial division by zero")
    q = 0
    db = poly_degree(b)
    while a and poly_degree(a) >= db:
        s = poly_degree(a) - db
        q ^= 1 << s
        a ^= b << s
    return q, a


def poly_mod(a: int, b: int) -> int:
    return poly_divmod(a, b)[1]


def poly_egcd(a: int, b: int) -> tuple[int, int, int]:
    """Extended gcd: returns (g, u, v) with u*a + v*b = g."""
    r0, r1 = a, b
    s0, s1 = 1, 0
    t0, t1 = 0, 1
    while r1:
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 ^ poly_mul(q, s1)
        t0, t1 = t1, t0 ^ poly_mul(q, t1)
    return r0, s0, t0


def poly_is_irreducible(p: int) -> bool:
    d = poly_degree(p)
    if d <= 0:
        return False
    if d == 1:
        return True
    for dd in range(1, d // 2 + 1):
        for c in range(1 << dd):
            q = (1 << dd) | c
            if poly_degree(q) == dd and poly_mod(p, q) == 0:
                return False
    return True


def factor_xn_plus_1(n: int) -> list[int]:
    """Distinct irreducible factors of x^n + 1 over GF(2), n odd."""
    if n % 2 == 0:
        raise ValueError("x^n + 1 is not squarefree over GF(2) for even n")
    rem = (1 << n) | 1
    factors = []
    d = 1
    while poly_degree(rem) > 0:
        found = False
        for c in range(1 << d):
            p = (1 << d) | c
            if poly_degree(p) != d:
                continue
            if poly_mod(rem, p) == 0 and poly_is_irreducible(p):
                factors.append(p)
                rem = poly_divmod(rem, p)[0]
                found = True
                break
        if not found:
            d += 1
    return sorted(factors, key=lambda p: (poly_degree(p), p))


def poly_reduce_matrix(n_in: int, modp: int) -> np.ndarray:
    """Binary matrix mapping degree<n_in coefficient vectors to residues
    modulo modp (degree-d output)."""
    d = poly_degree(modp)
    out = np.zeros((d, n_in), dtype=np.uint8)
    for i in range(n_in):
        r = poly_mod(1 << i, modp)
        for j in range(d):
            if (r >> j) & 1:
                out[j, i] = 1
    return out


# ---------------------------------------------------------------------------
# binary matrices acting on GF(2^m)-element vectors
# ---------------------------------------------------------------------------

def gf2_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Product of two binary matrices over GF(2)."""
    return (a.astype(np.int32) @ b.astype(np.int32) & 1).astype(np.uint8)


def xor_matvec(mat: np.ndarray, vec: np.ndarray, nbits: int) -> np.ndarray:
    """mat (R x C binary) applied to vec of field elements by XOR.

    vec may be 1-D (C,) or 2-D (C, B) for batched evaluation.
    """
    if mat.shape[1] == 0:
        shape = (mat.shape[0],) if vec.ndim == 1 else (mat.shape[0], vec.shape[1])
        return np.zeros(shape, dtype=np.int64)
    v = vec if vec.ndim == 2 else vec[:, None]
    # decompose into bit planes; parity per plane, then reassemble
    bits = ((v[:, :, None] >> np.arange(nbits)) & 1).astype(np.int32)
    c, b = v.shape
    flat = bits.reshape(c, b * nbits)
    acc = (mat.astype(np.int32) @ flat) & 1
    acc = acc.reshape(mat.shape[0], b, nbits)
    out = (acc.astype(np.int64) << np.arange(nbits)).sum(axis=2)
    return out if vec.ndim == 2 else out[:, 0]


def gf2_rank(rows: list[int]) -> int:
    rows = [r for r in rows if r]
    rank = 0
    while rows:
        pivot = rows.pop()
        rank += 1
        hb = 1 << poly_degree(pivot)
        rows = [(r ^ pivot) if (r & hb) else r for r in rows]
        rows = [r for r in rows if r]
    return rank


class Gf2Solver:
    """Solves for binary coordinates of elements in the span of a basis.

    Basis vectors and targets are m-bit integers.
    """

    def __init__(self, basis: list[int], nbits: int):
        d = len(basis)
        self.d = d
        self.nbits = nbits
        # augmented rows: high part = element bits, low part = coord indicator
        rows = [(basis[i] << d) | (1 << i) for i in range(d)]
        self._pivots: list[tuple[int, int]] = []  # (row index, element bit)
        used = set()
        for bit in reversed(range(nbits)):
            piv = None
            for i in range(d):
                if i in used:
                    continue
                if (rows[i] >> (d + bit)) & 1:
                    piv = i
                    break
            if piv is None:
                continue
            used.add(piv)
            for i in range(d):
                if i != piv and ((rows[i] >> (d + bit)) & 1):
                    rows[i] ^= rows[piv]
            self._pivots.append((piv, bit))
        self._rows = rows

    def solve(self, y: int) -> int:
        """Coordinates of y as a d-bit integer; raises if y not in the span."""
        acc = 0
        for i, bit in self._pivots:
            if (y >> bit) & 1:
                acc ^= self._rows[i]
        if (acc >> self.d) != y:
            raise ValueError("element not in basis span")
        return acc & ((1 << self.d) - 1)
