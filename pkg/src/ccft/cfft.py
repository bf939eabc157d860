"""Single-tier cyclotomic FFTs over GF(2^m) as explicit bilinear networks.

A length-n DFT (n odd, gamma of order n) is assembled from cyclotomic
cosets: each coset of size s contributes one length-s circular convolution
against a fixed operand built from a normal basis of the GF(2^s) subfield.
The fixed operand is folded into the constant vector, leaving
F = post @ (constants * (pre @ f[input_perm])) with binary pre/post.

The direct form (DCFFT) and its transpose-based symmetric form (SCFFT)
realize the same linear map; the symmetric form typically has a cheaper
post side once outputs are pruned.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import gf2
from .conv import short_conv
from .errors import DimensionMismatch, InvalidLength
from .gf import FieldContext, multiplicative_order, normal_basis


@dataclass(frozen=True)
class CyclotomicCosets:
    n: int
    cosets: tuple[tuple[int, ...], ...]


def cyclotomic_cosets(n: int) -> CyclotomicCosets:
    """Partition of {0..n-1} into orbits of i -> 2i mod n, ordered by leader."""
    if n <= 0 or n % 2 == 0:
        raise InvalidLength(f"transform length must be odd and positive, got {n}")
    seen = [False] * n
    cosets = []
    for k in range(n):
        if seen[k]:
            continue
        orbit = []
        i = k
        while not seen[i]:
            seen[i] = True
            orbit.append(i)
            i = (2 * i) % n
        cosets.append(tuple(orbit))
    return CyclotomicCosets(n, tuple(cosets))


@dataclass(frozen=True)
class XorProgram:
    """Shared-sum evaluation of a binary matrix after CSE.

    Terms 0..n_terms_in-1 are the matrix inputs; each op (a, b) appends a
    new term a XOR b.  outputs[r] is the term index realizing row r, or -1
    for an all-zero row.  Addition count = len(ops) + aliases beyond them
    (every op is exactly one addition; output aliasing is free).
    """
    n_terms_in: int
    ops: tuple[tuple[int, int], ...]
    outputs: tuple[int, ...]

    @property
    def add_count(self) -> int:
        return len(self.ops)

    def eval(self, values: np.ndarray) -> np.ndarray:
        terms = list(values)
        for a, b in self.ops:
            terms[len(terms):] = [terms[a] ^ terms[b]]
        zero = np.zeros_like(values[0]) if values.ndim == 2 else np.int64(0)
        return np.array([terms[t] if t >= 0 else zero for t in self.outputs])


@dataclass(frozen=True)
class BilinearNetwork:
    """F = post_matrix @ (constants * (pre_matrix @ f[input_perm]))."""
    n_in: int
    n_out: int
    pre_matrix: np.ndarray      # M x n_in, binary
    constants: np.ndarray       # M field elements, none zero
    post_matrix: np.ndarray     # n_out x M, binary
    input_perm: np.ndarray      # f' = f[input_perm]
    pre_program: XorProgram | None = field(default=None, compare=False)
    post_program: XorProgram | None = field(default=None, compare=False)


def _coset_blocks(ctx: FieldContext, n: int, gamma: int):
    """Per-coset convolution pieces shared by both network forms."""
    cosets = cyclotomic_cosets(n).cosets
    perm = []
    pre_blocks = []
    const_blocks = []
    post_blocks = []       # conv post per coset
    bases = []             # (leader, size, conjugate basis list)
    for orbit in cosets:
        k, s = orbit[0], len(orbit)
        if s == 1:
            perm.append(k)
            pre_blocks.append(np.ones((1, 1), np.uint8))
            const_blocks.append([1])
            post_blocks.append(np.ones((1, 1), np.uint8))
            bases.append((k, 1, [1]))
            continue
        beta = normal_basis(ctx, s)
        basis = []
        x = beta
        for _ in range(s):
            basis.append(x)
            x = ctx.mul(x, x)
        # g_t = f[k * 2^(-t)]: reversing inside the coset turns the
        # basis-power correlation into a plain circular convolution
        perm.extend((k * pow(2, (s - t) % s, n)) % n for t in range(s))
        alg = short_conv(s)
        consts = gf2.xor_matvec(alg.pre_a, np.array(basis, np.int64), ctx.m)
        assert np.all(consts != 0)  # guaranteed by basis independence
        pre_blocks.append(alg.pre_b)
        const_blocks.append(list(consts))
        post_blocks.append(alg.post)
        bases.append((k, s, basis))
    return perm, pre_blocks, const_blocks, post_blocks, bases


def _assemble_direct(ctx: FieldContext, n: int, gamma: int):
    perm, pre_blocks, const_blocks, post_blocks, bases = _coset_blocks(ctx, n, gamma)
    m_total = sum(b.shape[0] for b in pre_blocks)
    pre = np.zeros((m_total, n), np.uint8)
    row = col = 0
    for blk in pre_blocks:
        r, c = blk.shape
        pre[row:row + r, col:col + c] = blk
        row += r
        col += c
    constants = np.array([c for blk in const_blocks for c in blk], np.int64)
    post = np.zeros((n, m_total), np.uint8)
    lg = int(ctx.log[gamma])
    prod_off = 0
    for (k, s, basis), conv_post in zip(bases, post_blocks):
        mf = conv_post.shape[1]
        if s == 1:
            # gamma^(jk) must be 1 here (only the k = 0 coset has size 1
            # when gamma has full order n)
            for j in range(n):
                val = int(ctx.exp[(lg * ((j * k) % n)) % (ctx.q - 1)])
                assert val == 1
                post[j, prod_off] = 1
        else:
            solver = gf2.Gf2Solver(basis, ctx.m)
            for j in range(n):
                target = int(ctx.exp[(lg * ((j * k) % n)) % (ctx.q - 1)])
                coords = solver.solve(target)
                for t in range(s):
                    if (coords >> t) & 1:
                        post[j, prod_off:prod_off + mf] ^= conv_post[t]
        prod_off += mf
    return np.array(perm, np.int64), pre, constants, post


def build_dcfft(ctx: FieldContext, n: int, gamma: int) -> BilinearNetwork:
    """Direct-form cyclotomic FFT computing F_j = sum_i f_i gamma^(ij)."""
    _check_root(ctx, n, gamma)
    key = ("dcfft", n, gamma)
    net = ctx._net_cache.get(key)
    if net is None:
        perm, pre, constants, post = _assemble_direct(ctx, n, gamma)
        net = BilinearNetwork(n, n, pre, constants, post, perm)
        ctx._net_cache[key] = net
    return net


def build_scfft(ctx: FieldContext, n: int, gamma: int) -> BilinearNetwork:
    """Symmetric (transposed) form of the same DFT map.

    The DFT matrix is symmetric, so transposing the direct network and
    folding its input permutation into the new post side yields an
    equivalent network with the pre/post roles swapped."""
    _check_root(ctx, n, gamma)
    key = ("scfft", n, gamma)
    net = ctx._net_cache.get(key)
    if net is None:
        d = build_dcfft(ctx, n, gamma)
        pre = d.post_matrix.T.copy()
        post = np.zeros((n, pre.shape[0]), np.uint8)
        post[d.input_perm] = d.pre_matrix.T
        net = BilinearNetwork(n, n, pre, d.constants.copy(), post,
                              np.arange(n, dtype=np.int64))
        ctx._net_cache[key] = net
    return net


def _check_root(ctx: FieldContext, n: int, gamma: int) -> None:
    if gamma == 0 or multiplicative_order(ctx, gamma) != n:
        raise InvalidLength(f"gamma does not have order {n}")


def eval_network(ctx: FieldContext, net: BilinearNetwork, f: np.ndarray) -> np.ndarray:
    """Evaluate the network on one vector (n_in,) or a batch (n_in, B)."""
    f = np.asarray(f, dtype=np.int64)
    if f.shape[0] != net.n_in:
        raise DimensionMismatch(f"expected {net.n_in} inputs, got {f.shape[0]}")
    fp = f[net.input_perm]
    if net.pre_program is not None:
        u = net.pre_program.eval(fp)
    else:
        u = gf2.xor_matvec(net.pre_matrix, fp, ctx.m)
    c = net.constants if f.ndim == 1 else net.constants[:, None]
    u = ctx.vmul(c, u)
    if net.post_program is not None:
        return net.post_program.eval(u)
    return gf2.xor_matvec(net.post_matrix, u, ctx.m)


def network_counts(net: BilinearNetwork) -> tuple[int, int]:
    """(multiplications, additions) of one network evaluation.

    Constants equal to 1 are free.  A binary matrix with w ones spread over
    r nonempty rows costs w - r additions; a CSE program replaces that with
    its own op count."""
    mult = int(np.count_nonzero(net.constants != 1))
    add = 0
    for mat, prog in ((net.pre_matrix, net.pre_program),
                      (net.post_matrix, net.post_program)):
        if prog is not None:
            add += prog.add_count
        else:
            rw = mat.sum(axis=1, dtype=np.int64)
            add += int(rw.sum() - np.count_nonzero(rw))
    return mult, add


def naive_dft(ctx: FieldContext, n: int, gamma: int, f: np.ndarray) -> np.ndarray:
    """O(n^2) reference DFT: F_j = sum_i f_i gamma^(ij).  Accepts batches."""
    f = np.asarray(f, dtype=np.int64)
    single = f.ndim == 1
    fv = f[:, None] if single else f
    lg = int(ctx.log[gamma])
    logs = ctx.log[fv]
    nonzero = fv != 0
    out = np.zeros((n, fv.shape[1]), np.int64)
    i_idx = np.arange(n, dtype=np.int64)
    for j in range(n):
        e = (lg * ((i_idx * j) % n)) % (ctx.q - 1)
        terms = ctx.exp[(logs + e[:, None]) % (ctx.q - 1)]
        terms = np.where(nonzero, terms, 0)
        out[j] = np.bitwise_xor.reduce(terms, axis=0)
    return out[:, 0] if single else out
