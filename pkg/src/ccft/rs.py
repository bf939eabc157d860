"""Errors-and-erasures Reed-Solomon decoding on pruned transform plans.

The decoder follows the classic three-step structure: syndromes, key
equation (erasure-initialized Berlekamp-Massey), then a combined Chien
search / Forney evaluation.  Syndromes are the first 2t outputs of a
partial transform whose inputs beyond n' are declared zero; the Chien and
Forney evaluations run three dual-partial transforms (evaluator, even and
odd locator parts) at the inverse code points, exploiting the
characteristic-2 identity x * L'(x) = L_odd(x) so that root detection and
magnitude evaluation share the same evaluations.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .cost import count
from .errors import InconsistentPair, LengthMismatch
from .gf import FieldContext, element_of_order
from .planner import (DCFFT, SCFFT, PrunedPlan, eval_pruned, plan, prune)

# form candidates tried per prepared transform; the cheapest wins
_FORM_CANDIDATES = ((DCFFT, SCFFT), (DCFFT, DCFFT), (SCFFT, SCFFT))


@dataclass
class Polys:
    """Errata locator/evaluator pair with the even/odd locator split."""
    locator: np.ndarray       # Lambda, locator coefficients, locator[0] == 1
    evaluator: np.ndarray     # Omega = S * Lambda mod x^(2t)

    @property
    def even(self) -> np.ndarray:
        out = self.locator.copy()
        out[1::2] = 0
        return out

    @property
    def odd(self) -> np.ndarray:
        out = self.locator.copy()
        out[0::2] = 0
        return out

    @property
    def degree(self) -> int:
        nz = np.flatnonzero(self.locator)
        return int(nz[-1]) if len(nz) else 0


@dataclass
class DecodeResult:
    codeword: np.ndarray
    positions: list[int]
    magnitudes: list[int]
    status: str                      # "corrected" | "failure-detected"
    divisions: int = 0
    combine_additions: int = 0


class RSCodeSpec:
    """A (possibly shortened) RS code with its prepared partial transforms.

    Parent code is (n, k) over GF(2^m) with n | 2^m - 1; the shortened
    view (n', k') fixes the top n - n' symbols to zero.  Generator roots
    are alpha^b .. alpha^(b + 2t - 1) for alpha of order n.
    """

    def __init__(self, field_ctx: FieldContext, n: int, k: int,
                 n_short: int | None = None, k_short: int | None = None,
                 b: int = 0, factors: list[int] | None = None):
        if (field_ctx.q - 1) % n != 0:
            raise ValueError(f"n={n} does not divide 2^{field_ctx.m}-1")
        if not 0 < k < n:
            raise ValueError(f"invalid dimension k={k}")
        if (n - k) % 2 != 0:
            raise ValueError("n - k must be even (2t parity symbols)")
        n_short = n if n_short is None else n_short
        k_short = k - (n - n_short) if k_short is None else k_short
        if n_short - k_short != n - k or not 0 < k_short <= n_short <= n:
            raise ValueError("shortened parameters inconsistent with parent code")
        self.field = field_ctx
        self.n = n
        self.k = k
        self.n_short = n_short
        self.k_short = k_short
        self.b = b
        self.t = (n - k) // 2
        self.alpha = element_of_order(field_ctx, n)
        self.factors = factors
        gen = np.array([1], np.int64)
        for i in range(b, b + 2 * self.t):
            root = field_ctx.pow(self.alpha, i)
            nxt = np.zeros(len(gen) + 1, np.int64)
            nxt[1:] ^= gen
            nxt[:-1] ^= field_ctx.vmul(gen, np.int64(root))
            gen = nxt
        self.generator = gen                     # ascending coefficients
        self._plans: dict[str, PrunedPlan] = {}

    # -- transform shapes ------------------------------------------------

    def transform_shapes(self, step: str):
        """(label, zero_inputs, wanted_outputs, gamma) per needed DFT."""
        n, np_, t, b = self.n, self.n_short, self.t, self.b
        ctx = self.field
        if step == "syndrome":
            return [("syndrome", range(np_, n), range(b, b + 2 * t), self.alpha)]
        if step == "chien-forney":
            inv_alpha = ctx.inv(self.alpha)
            wanted = range(np_)
            zero_omega = range(2 * t, n)
            zero_even = [i for i in range(n) if i % 2 == 1 or i > 2 * t]
            zero_odd = [i for i in range(n) if i % 2 == 0 or i > 2 * t]
            return [("evaluator", zero_omega, wanted, inv_alpha),
                    ("locator-even", zero_even, wanted, inv_alpha),
                    ("locator-odd", zero_odd, wanted, inv_alpha)]
        raise ValueError(f"unknown step {step!r}")

    def _prepared(self, label: str) -> PrunedPlan:
        pp = self._plans.get(label)
        if pp is not None:
            return pp
        step = "syndrome" if label == "syndrome" else "chien-forney"
        for lbl, zero_in, wanted, gamma in self.transform_shapes(step):
            if lbl in self._plans:
                continue
            factors = self.factors or _default_factors(self.n)
            best = None
            for forms in _FORM_CANDIDATES:
                fm = forms if len(factors) > 1 else (forms[-1],)
                p = plan(self.field, self.n, factors, forms=fm, gamma=gamma)
                cand = prune(self.field, p, zero_in, wanted)
                c = count(self.field, cand)
                if best is None or c.weighted_total < best[1].weighted_total:
                    best = (cand, c)
            self._plans[lbl] = best[0]
        return self._plans[label]


def _default_factors(n: int) -> list[int]:
    """Most balanced coprime two-way split, if any; else single tier."""
    best = None
    for d in range(2, int(math.isqrt(n)) + 1):
        if n % d == 0 and math.gcd(d, n // d) == 1:
            best = [d, n // d]
    return best if best else [n]


def make_code(ctx: FieldContext, n: int, k: int, n_short: int | None = None,
              k_short: int | None = None, b: int = 0,
              factors: list[int] | None = None) -> RSCodeSpec:
    return RSCodeSpec(ctx, n, k, n_short, k_short, b, factors)


# ---------------------------------------------------------------------------
# encoder
# ---------------------------------------------------------------------------

def encode(spec: RSCodeSpec, message: np.ndarray) -> np.ndarray:
    """Systematic encoding: parity in positions [0, 2t), message above."""
    message = np.asarray(message, dtype=np.int64)
    if message.shape[0] != spec.k_short:
        raise LengthMismatch(f"message must have {spec.k_short} symbols")
    ctx = spec.field
    two_t = 2 * spec.t
    # remainder of message * x^(2t) modulo the generator
    rem = np.zeros(two_t, np.int64)
    g = spec.generator
    for coeff in message[::-1]:
        feedback = int(coeff) ^ int(rem[-1])
        rem[1:] = rem[:-1]
        rem[0] = 0
        if feedback:
            rem ^= ctx.vmul(g[:-1], np.int64(feedback))
    codeword = np.concatenate([rem, message])
    return codeword


# ---------------------------------------------------------------------------
# syndromes
# ---------------------------------------------------------------------------

def syndromes(spec: RSCodeSpec, received: np.ndarray) -> np.ndarray:
    """S_j = sum_i r_i alpha^(i(j+b)), j = 0..2t-1, via the pruned plan."""
    received = np.asarray(received, dtype=np.int64)
    if received.shape[0] != spec.n_short:
        raise LengthMismatch(f"received word must have {spec.n_short} symbols")
    pp = spec._prepared("syndrome")
    padded = np.zeros((spec.n,) + received.shape[1:], np.int64)
    padded[:spec.n_short] = received
    out = eval_pruned(spec.field, pp, padded)
    return np.array([out[j] for j in range(spec.b, spec.b + 2 * spec.t)])


def horner_syndromes(spec: RSCodeSpec, received: np.ndarray) -> np.ndarray:
    """Independent direct evaluation of the same 2t syndromes."""
    received = np.asarray(received, dtype=np.int64)
    if received.shape[0] != spec.n_short:
        raise LengthMismatch(f"received word must have {spec.n_short} symbols")
    ctx = spec.field
    la = int(ctx.log[spec.alpha])
    i_idx = np.arange(spec.n_short, dtype=np.int64)
    logs = ctx.log[received]
    nz = received != 0
    out = np.zeros((2 * spec.t,) + received.shape[1:], np.int64)
    for j in range(2 * spec.t):
        e = (la * ((i_idx * (j + spec.b)) % spec.n)) % (ctx.q - 1)
        e = e.reshape(e.shape + (1,) * (received.ndim - 1))
        terms = np.where(nz, ctx.exp[logs + e], 0)
        out[j] = np.bitwise_xor.reduce(terms, axis=0)
    return out


# ---------------------------------------------------------------------------
# key equation: erasure-initialized Berlekamp-Massey
# ---------------------------------------------------------------------------

def key_equation(spec: RSCodeSpec, synd: np.ndarray, erasures=()) -> Polys:
    """Solve for the errata locator and evaluator.

    The locator is seeded with the erasure locator, so no Forney-syndrome
    transformation is needed; 2t - rho BM iterations refine it."""
    ctx = spec.field
    two_t = 2 * spec.t
    synd = np.asarray(synd, dtype=np.int64)
    erasures = sorted(set(int(e) for e in erasures))
    if any(not 0 <= e < spec.n_short for e in erasures):
        raise ValueError("erasure position out of range")
    rho = len(erasures)

    size = two_t + 1
    lam = np.zeros(size, np.int64)
    lam[0] = 1
    for e in erasures:
        x_e = ctx.pow(spec.alpha, e)
        lam[1:] ^= ctx.vmul(lam[:-1], np.int64(x_e))
    aux = lam.copy()
    used = rho
    for r in range(rho, two_t):
        upto = min(r, size - 1)
        delta = 0
        prods = ctx.vmul(lam[:upto + 1], synd[r - upto:r + 1][::-1])
        for v in prods:
            delta ^= int(v)
        aux = np.concatenate([[0], aux[:-1]])      # aux *= x
        if delta:
            cand = lam ^ ctx.vmul(aux, np.int64(delta))
            if 2 * used <= r + rho:
                aux = ctx.vmul(lam, np.int64(ctx.inv(delta)))
                used = r + 1 - used + rho
            lam = cand
    # evaluator: Omega = S * Lambda mod x^(2t)
    omega = np.zeros(two_t if two_t else 1, np.int64)
    for i in range(two_t):
        if lam[i] == 0:
            continue
        omega[i:] ^= ctx.vmul(synd[:two_t - i], np.int64(lam[i]))
    return Polys(lam, omega)


# ---------------------------------------------------------------------------
# combined Chien search and Forney evaluation
# ---------------------------------------------------------------------------

def chien_forney(spec: RSCodeSpec, pair: Polys) -> tuple[list[int], list[int], dict]:
    """Locate errata and compute magnitudes.

    Evaluates the evaluator and the even/odd locator parts at alpha^(-j)
    for all j < n' through three dual-partial plans; roots are where the
    even and odd parts cancel (n' combine additions), and each magnitude
    costs one division."""
    ctx = spec.field
    n, np_ = spec.n, spec.n_short
    pads = {}
    for name, poly in (("evaluator", pair.evaluator),
                       ("locator-even", pair.even),
                       ("locator-odd", pair.odd)):
        buf = np.zeros(n, np.int64)
        buf[:len(poly)] = poly
        pads[name] = buf
    evals = {}
    for name in pads:
        pp = spec._prepared(name)
        out = eval_pruned(ctx, pp, pads[name])
        evals[name] = np.array([out[j] for j in range(np_)], np.int64)
    lam_at = evals["locator-even"] ^ evals["locator-odd"]   # n' additions
    roots = np.flatnonzero(lam_at == 0)
    positions: list[int] = []
    magnitudes: list[int] = []
    divisions = 0
    for j in roots:
        j = int(j)
        odd_v = int(evals["locator-odd"][j])
        if odd_v == 0:
            raise InconsistentPair(
                f"odd locator part vanishes at root alpha^-{j}")
        num = int(evals["evaluator"][j])
        mag = ctx.div(num, odd_v)
        divisions += 1
        if spec.b:
            mag = ctx.mul(mag, ctx.pow(ctx.inv(spec.alpha), j * spec.b))
        positions.append(j)
        magnitudes.append(mag)
    counters = {"divisions": divisions, "combine_additions": np_}
    return positions, magnitudes, counters


def _poly_eval_points(ctx: FieldContext, poly: np.ndarray, base: int,
                      npoints: int) -> np.ndarray:
    """Evaluate poly at base^j for j = 0..npoints-1, directly."""
    out = np.zeros(npoints, np.int64)
    lb = int(ctx.log[base])
    for i in np.flatnonzero(poly):
        e = (lb * int(i)) % (ctx.q - 1)
        js = (np.arange(npoints, dtype=np.int64) * e) % (ctx.q - 1)
        out ^= ctx.exp[(js + int(ctx.log[poly[i]])) % (ctx.q - 1)]
    return out


def horner_chien_forney(spec: RSCodeSpec, pair: Polys):
    """Direct-evaluation twin of chien_forney, used as an oracle."""
    ctx = spec.field
    inv_a = ctx.inv(spec.alpha)
    ev = _poly_eval_points(ctx, pair.evaluator, inv_a, spec.n_short)
    even = _poly_eval_points(ctx, pair.even, inv_a, spec.n_short)
    odd = _poly_eval_points(ctx, pair.odd, inv_a, spec.n_short)
    positions, magnitudes = [], []
    divisions = 0
    for j in np.flatnonzero((even ^ odd) == 0):
        j = int(j)
        if odd[j] == 0:
            raise InconsistentPair(
                f"odd locator part vanishes at root alpha^-{j}")
        mag = ctx.div(int(ev[j]), int(odd[j]))
        divisions += 1
        if spec.b:
            mag = ctx.mul(mag, ctx.pow(ctx.inv(spec.alpha), j * spec.b))
        positions.append(j)
        magnitudes.append(mag)
    return positions, magnitudes, {"divisions": divisions,
                                   "combine_additions": spec.n_short}


# ---------------------------------------------------------------------------
# full decoder
# ---------------------------------------------------------------------------

def decode(spec: RSCodeSpec, received: np.ndarray, erasures=(),
           backend: str = "plan") -> DecodeResult:
    if backend not in ("plan", "horner"):
        raise ValueError(f"unknown backend {backend!r}")
    received = np.asarray(received, dtype=np.int64)
    if received.shape[0] != spec.n_short:
        raise LengthMismatch(f"received word must have {spec.n_short} symbols")
    erasures = sorted(set(int(e) for e in erasures))
    synd = (syndromes if backend == "plan" else horner_syndromes)(spec, received)
    if not synd.any() and not erasures:
        return DecodeResult(received.copy(), [], [], "corrected")

    def failure() -> DecodeResult:
        return DecodeResult(received.copy(), [], [], "failure-detected")

    pair = key_equation(spec, synd, erasures)
    if pair.locator[0] != 1:
        return failure()
    search = chien_forney if backend == "plan" else horner_chien_forney
    try:
        positions, magnitudes, counters = search(spec, pair)
    except InconsistentPair:
        return failure()
    if len(positions) != pair.degree:
        return failure()
    corrected = received.copy()
    for p, v in zip(positions, magnitudes):
        corrected[p] ^= v
    # miscorrection guard: never return a non-codeword
    if horner_syndromes(spec, corrected).any():
        return failure()
    return DecodeResult(corrected, positions, magnitudes, "corrected",
                        divisions=counters["divisions"],
                        combine_additions=counters["combine_additions"])


# ---------------------------------------------------------------------------
# symbol streams: binary little-endian 16-bit words + JSON sidecar header,
# or whitespace-separated hex text
# ---------------------------------------------------------------------------

def header_dict(spec: RSCodeSpec) -> dict:
    return {"m": spec.field.m, "prim_poly": spec.field.prim_poly,
            "n": spec.n, "k": spec.k, "n_short": spec.n_short,
            "k_short": spec.k_short, "b": spec.b}


def sidecar_path(path: str) -> str:
    return path + ".json"


def write_symbols(path: str, header: dict, symbols: np.ndarray) -> None:
    symbols = np.asarray(symbols, dtype=np.int64)
    if path.endswith((".hex", ".txt")):
        with open(path, "w") as fh:
            fh.write(" ".join(format(int(s), "x") for s in symbols) + "\n")
    else:
        symbols.astype("<u2").tofile(path)
    with open(sidecar_path(path), "w") as fh:
        json.dump(header, fh)


def read_symbols(path: str) -> tuple[dict | None, np.ndarray]:
    header = None
    try:
        with open(sidecar_path(path)) as fh:
            header = json.load(fh)
    except FileNotFoundError:
        pass
    if path.endswith((".hex", ".txt")):
        with open(path) as fh:
            symbols = np.array([int(tok, 16) for tok in fh.read().split()],
                               np.int64)
    else:
        symbols = np.fromfile(path, dtype="<u2").astype(np.int64)
    if header is not None:
        limit = 1 << header["m"]
        if np.any(symbols >= limit):
            raise ValueError(
                f"symbol value out of range for GF(2^{header['m']})")
    return header, symbols
