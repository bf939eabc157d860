"""Composite-transform planning: tiering, twiddles, pruning, serialization.

A TransformPlan compiles an n-point DFT into a flat dataflow over "wires":
global inputs feed tier-1 sub-networks, whose outputs (possibly multiplied
by twiddle constants) feed the next tier, recursively for more than two
factors.  Coprime adjacent factors use the Good (prime-factor) index maps
i -> (i mod N1, i mod N2) with outputs recombined by CRT -- no twiddles.
Non-coprime splits use decimation-in-time Cooley-Tukey with twiddles on
the cross-tier wires.

Pruning is dead-code elimination over that dataflow: a forward pass marks
wires that are structurally zero given the declared zero inputs, a
backward pass marks wires actually needed for the wanted outputs, and each
surviving sub-network instance is specialized to its live rows, columns
and constants.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import gf2
from .cfft import BilinearNetwork, build_dcfft, build_scfft
from .errors import (BadFactorization, DimensionMismatch, PrecisionViolation)
from .gf import FieldContext, element_of_order, make_field

DCFFT = "dcfft"
SCFFT = "scfft"


@dataclass
class Instance:
    """One sub-network placement: pre-matrix column c reads in_wires[c]."""
    net: BilinearNetwork
    in_wires: np.ndarray    # length n_in, input permutation already folded
    out_wires: np.ndarray   # length n_out


@dataclass
class TransformPlan:
    ctx: FieldContext
    n: int
    factors: list[int]
    forms: list[str]
    gamma: int
    num_wires: int
    instances: list[Instance]
    twiddles: list[tuple[int, int, int]]     # (dst_wire, src_wire, constant)
    steps: list[tuple[str, int]]             # ("net", idx) / ("tw", idx), topo order
    input_wires: np.ndarray
    output_wires: np.ndarray


def choose_forms(scenario: str) -> tuple[str, str]:
    """Recommended (first tier, last tier) forms per pruning scenario."""
    table = {
        "freq-partial": (SCFFT, SCFFT),
        "time-partial": (DCFFT, DCFFT),
        "both": (DCFFT, SCFFT),
    }
    if scenario not in table:
        raise ValueError(f"unknown scenario {scenario!r}")
    return table[scenario]


def _expand_forms(factors: list[int], forms) -> list[str]:
    k = len(factors)
    if forms is None:
        forms = (DCFFT, SCFFT) if k > 1 else (SCFFT,)
    if isinstance(forms, str):
        return [forms] * k
    forms = list(forms)
    if len(forms) == 2 and k > 2:
        forms = [forms[0]] * (k - 1) + [forms[1]]
    if len(forms) == 1:
        forms = forms * k
    if len(forms) != k:
        raise BadFactorization(f"{len(forms)} forms for {k} factors")
    for f in forms:
        if f not in (DCFFT, SCFFT):
            raise BadFactorization(f"unknown form {f!r}")
    return forms


def plan(ctx: FieldContext, n: int, factors: list[int] | None = None,
         forms=None, gamma: int | None = None) -> TransformPlan:
    """Compile an n-point DFT plan for the given ordered factorization."""
    factors = list(factors) if factors else [n]
    if math.prod(factors) != n or any(f < 1 for f in factors):
        raise BadFactorization(f"factors {factors} do not multiply to {n}")
    factors = [f for f in factors if f > 1] or [n] if n > 1 else [1]
    forms = _expand_forms(factors, forms)
    if gamma is None:
        gamma = element_of_order(ctx, n)

    state = {"next": 0}

    def alloc(count: int) -> np.ndarray:
        w = np.arange(state["next"], state["next"] + count, dtype=np.int64)
        state["next"] += count
        return w

    input_wires = alloc(n)
    output_wires = alloc(n)
    instances: list[Instance] = []
    twiddles: list[tuple[int, int, int]] = []
    steps: list[tuple[str, int]] = []

    def leaf(length: int, form: str, root: int,
             in_ids: np.ndarray, out_ids: np.ndarray) -> None:
        net = build_dcfft(ctx, length, root) if form == DCFFT \
            else build_scfft(ctx, length, root)
        instances.append(Instance(net, in_ids[net.input_perm], out_ids))
        steps.append(("net", len(instances) - 1))

    def build(length: int, facs: list[int], fms: list[str], root: int,
              in_ids: np.ndarray, out_ids: np.ndarray) -> None:
        if len(facs) == 1:
            leaf(length, fms[0], root, in_ids, out_ids)
            return
        n1 = facs[0]
        n2 = length // n1
        coprime = math.gcd(n1, n2) == 1
        if coprime:
            inv2 = pow(n2, -1, n1)
            inv1 = pow(n1, -1, n2)
            e1 = (n2 * inv2) % length
            e2 = (n1 * inv1) % length
            root1 = ctx.pow(root, e1)
            root2 = ctx.pow(root, e2)
            in_map = lambda i1, i2: (i1 * e1 + i2 * e2) % length
            out_map = in_map
        else:
            root1 = ctx.pow(root, n2)
            root2 = ctx.pow(root, n1)
            in_map = lambda i1, i2: n2 * i1 + i2
            out_map = lambda k1, k2: k1 + n1 * k2
        mid = alloc(n1 * n2).reshape(n2, n1)   # mid[n2_idx, k1]
        for j2 in range(n2):
            ids = np.array([in_ids[in_map(i1, j2)] for i1 in range(n1)])
            leaf(n1, fms[0], root1, ids, mid[j2])
        tier2_in = mid.copy()
        if not coprime:
            lr = int(ctx.log[root])
            for j2 in range(n2):
                for k1 in range(n1):
                    c = int(ctx.exp[(lr * ((j2 * k1) % length)) % (ctx.q - 1)])
                    if c != 1:
                        dst = int(alloc(1)[0])
                        twiddles.append((dst, int(mid[j2, k1]), c))
                        steps.append(("tw", len(twiddles) - 1))
                        tier2_in[j2, k1] = dst
        for k1 in range(n1):
            sub_out = np.array([out_ids[out_map(k1, k2)] for k2 in range(n2)])
            build(n2, facs[1:], fms[1:], root2, tier2_in[:, k1], sub_out)

    build(n, factors, forms, gamma, input_wires, output_wires)
    return TransformPlan(ctx, n, factors, forms, gamma, state["next"],
                         instances, twiddles, steps, input_wires, output_wires)


def eval_plan(ctx: FieldContext, p: TransformPlan, f: np.ndarray) -> np.ndarray:
    """Full-plan evaluation; f is (n,) or (n, B)."""
    f = np.asarray(f, dtype=np.int64)
    if f.shape[0] != p.n:
        raise DimensionMismatch(f"expected {p.n} inputs, got {f.shape[0]}")
    shape = (p.num_wires,) if f.ndim == 1 else (p.num_wires, f.shape[1])
    vals = np.zeros(shape, np.int64)
    vals[p.input_wires] = f
    for kind, idx in p.steps:
        if kind == "net":
            inst = p.instances[idx]
            net = inst.net
            u = gf2.xor_matvec(net.pre_matrix, vals[inst.in_wires], ctx.m)
            c = net.constants if f.ndim == 1 else net.constants[:, None]
            u = ctx.vmul(c, u)
            vals[inst.out_wires] = gf2.xor_matvec(net.post_matrix, u, ctx.m)
        else:
            dst, src, c = p.twiddles[idx]
            vals[dst] = ctx.vmul(np.int64(c), vals[src])
    return vals[p.output_wires]


@dataclass
class LiveInstance:
    """Pruned specialization of one Instance, ready for evaluation."""
    index: int
    in_wires: np.ndarray
    out_wires: np.ndarray
    pre: np.ndarray
    constants: np.ndarray
    post: np.ndarray
    cols: np.ndarray        # live pre columns (into the original matrix)
    prods: np.ndarray       # live products
    rows: np.ndarray        # live output rows


@dataclass
class PrunedPlan:
    base: TransformPlan
    zero_inputs: frozenset[int]
    wanted_outputs: tuple[int, ...]
    wire_zero: np.ndarray = field(repr=False)
    live_steps: list[tuple[str, object]] = field(repr=False, default_factory=list)

    @property
    def live_instances(self) -> list[LiveInstance]:
        return [x for k, x in self.live_steps if k == "net"]

    def live_instance_for(self, index: int) -> LiveInstance | None:
        for k, x in self.live_steps:
            if k == "net" and x.index == index:
                return x
        return None


def prune(ctx: FieldContext, p: TransformPlan, zero_inputs, wanted_outputs) -> PrunedPlan:
    """Dead-code elimination against known-zero inputs / wanted outputs."""
    zero_inputs = frozenset(int(i) for i in zero_inputs)
    wanted = tuple(sorted(int(i) for i in set(wanted_outputs)))
    for i in zero_inputs:
        if not 0 <= i < p.n:
            raise ValueError(f"zero input index {i} out of range")
    for i in wanted:
        if not 0 <= i < p.n:
            raise ValueError(f"wanted output index {i} out of range")

    zero = np.zeros(p.num_wires, bool)
    zero[p.input_wires[list(zero_inputs)]] = True
    prod_nonzero: dict[int, np.ndarray] = {}
    # forward: structural zeros
    for kind, idx in p.steps:
        if kind == "net":
            inst = p.instances[idx]
            nz_in = (~zero[inst.in_wires]).astype(np.int32)
            pnz = (inst.net.pre_matrix.astype(np.int32) @ nz_in) > 0
            prod_nonzero[idx] = pnz
            out_nz = (inst.net.post_matrix.astype(np.int32) @ pnz.astype(np.int32)) > 0
            zero[inst.out_wires] = ~out_nz
        else:
            dst, src, _ = p.twiddles[idx]
            zero[dst] = zero[src]

    needed = np.zeros(p.num_wires, bool)
    needed[p.output_wires[list(wanted)]] = True
    live_flags: dict[tuple[str, int], object] = {}
    # backward: demand
    for kind, idx in reversed(p.steps):
        if kind == "net":
            inst = p.instances[idx]
            rows = needed[inst.out_wires] & ~zero[inst.out_wires]
            if not rows.any():
                continue
            pnz = prod_nonzero[idx]
            prods = inst.net.post_matrix[rows].any(axis=0) & pnz
            cols = inst.net.pre_matrix[prods].any(axis=0) & ~zero[inst.in_wires]
            needed[inst.in_wires[cols]] = True
            live_flags[(kind, idx)] = (rows, prods, cols)
        else:
            dst, src, _ = p.twiddles[idx]
            if needed[dst] and not zero[dst]:
                needed[src] = True
                live_flags[(kind, idx)] = True

    live_steps: list[tuple[str, object]] = []
    for kind, idx in p.steps:
        flag = live_flags.get((kind, idx))
        if flag is None:
            continue
        if kind == "net":
            inst = p.instances[idx]
            rows, prods, cols = flag
            li = LiveInstance(
                index=idx,
                in_wires=inst.in_wires[cols],
                out_wires=inst.out_wires[rows],
                pre=np.ascontiguousarray(inst.net.pre_matrix[np.ix_(prods, cols)]),
                constants=inst.net.constants[prods],
                post=np.ascontiguousarray(inst.net.post_matrix[np.ix_(rows, prods)]),
                cols=np.flatnonzero(cols),
                prods=np.flatnonzero(prods),
                rows=np.flatnonzero(rows),
            )
            live_steps.append(("net", li))
        else:
            live_steps.append(("tw", idx))
    return PrunedPlan(p, zero_inputs, wanted, zero, live_steps)


def eval_pruned(ctx: FieldContext, pp: PrunedPlan, f: np.ndarray) -> dict[int, np.ndarray]:
    """Evaluate only the live portion; returns {output index: value}."""
    p = pp.base
    f = np.asarray(f, dtype=np.int64)
    if f.shape[0] != p.n:
        raise DimensionMismatch(f"expected {p.n} inputs, got {f.shape[0]}")
    zi = sorted(pp.zero_inputs)
    if zi and np.any(f[zi] != 0):
        raise PrecisionViolation("input is nonzero on a declared-zero index")
    shape = (p.num_wires,) if f.ndim == 1 else (p.num_wires, f.shape[1])
    vals = np.zeros(shape, np.int64)
    vals[p.input_wires] = f
    for kind, item in pp.live_steps:
        if kind == "net":
            u = gf2.xor_matvec(item.pre, vals[item.in_wires], ctx.m)
            c = item.constants if f.ndim == 1 else item.constants[:, None]
            u = ctx.vmul(c, u)
            vals[item.out_wires] = gf2.xor_matvec(item.post, u, ctx.m)
        else:
            dst, src, c = p.twiddles[item]
            vals[dst] = ctx.vmul(np.int64(c), vals[src])
    return {j: vals[p.output_wires[j]] for j in pp.wanted_outputs}


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def _mat_to_hex(mat: np.ndarray) -> list[str]:
    out = []
    for row in mat:
        v = 0
        for i in np.flatnonzero(row):
            v |= 1 << int(i)
        out.append(format(v, "x"))
    return out


def _mat_from_hex(rows: list[str], ncols: int) -> np.ndarray:
    mat = np.zeros((len(rows), ncols), np.uint8)
    for r, h in enumerate(rows):
        v = int(h, 16)
        while v:
            b = v & -v
            mat[r, b.bit_length() - 1] = 1
            v ^= b
    return mat


def plan_to_dict(p: TransformPlan, pruned: PrunedPlan | None = None) -> dict:
    nets: list[BilinearNetwork] = []
    net_ids: dict[int, int] = {}
    inst_rows = []
    for inst in p.instances:
        key = id(inst.net)
        if key not in net_ids:
            net_ids[key] = len(nets)
            nets.append(inst.net)
        inst_rows.append({
            "net": net_ids[key],
            "in_wires": inst.in_wires.tolist(),
            "out_wires": inst.out_wires.tolist(),
        })
    doc = {
        "field": {"m": p.ctx.m, "prim_poly": format(p.ctx.prim_poly, "x")},
        "n": p.n,
        "factors": p.factors,
        "forms": p.forms,
        "gamma": format(p.gamma, "x"),
        "num_wires": p.num_wires,
        "networks": [{
            "n_in": net.n_in,
            "n_out": net.n_out,
            "pre": _mat_to_hex(net.pre_matrix),
            "post": _mat_to_hex(net.post_matrix),
            "constants": [format(int(c), "x") for c in net.constants],
            "input_perm": net.input_perm.tolist(),
        } for net in nets],
        "instances": inst_rows,
        "twiddles": [[d, s, format(c, "x")] for d, s, c in p.twiddles],
        "steps": [[k, i] for k, i in p.steps],
        "input_wires": p.input_wires.tolist(),
        "output_wires": p.output_wires.tolist(),
    }
    if pruned is not None:
        doc["pruning"] = {
            "zero_inputs": sorted(pruned.zero_inputs),
            "wanted_outputs": list(pruned.wanted_outputs),
            "live_masks": [{
                "instance": li.index,
                "rows": li.rows.tolist(),
                "products": li.prods.tolist(),
                "columns": li.cols.tolist(),
            } for li in pruned.live_instances],
        }
    return doc


def plan_from_dict(doc: dict, ctx: FieldContext | None = None):
    """Rebuild a plan (and its pruning, if present).  Returns
    (TransformPlan, PrunedPlan | None)."""
    if ctx is None:
        ctx = make_field(doc["field"]["m"], int(doc["field"]["prim_poly"], 16))
    nets = []
    for nd in doc["networks"]:
        m_rows = len(nd["constants"])
        nets.append(BilinearNetwork(
            nd["n_in"], nd["n_out"],
            _mat_from_hex(nd["pre"], nd["n_in"]),
            np.array([int(c, 16) for c in nd["constants"]], np.int64),
            _mat_from_hex(nd["post"], m_rows),
            np.array(nd["input_perm"], np.int64),
        ))
    instances = [Instance(nets[r["net"]],
                          np.array(r["in_wires"], np.int64),
                          np.array(r["out_wires"], np.int64))
                 for r in doc["instances"]]
    p = TransformPlan(
        ctx=ctx, n=doc["n"], factors=list(doc["factors"]),
        forms=list(doc["forms"]), gamma=int(doc["gamma"], 16),
        num_wires=doc["num_wires"], instances=instances,
        twiddles=[(d, s, int(c, 16)) for d, s, c in doc["twiddles"]],
        steps=[(k, i) for k, i in doc["steps"]],
        input_wires=np.array(doc["input_wires"], np.int64),
        output_wires=np.array(doc["output_wires"], np.int64),
    )
    pruned = None
    if "pruning" in doc:
        pr = doc["pruning"]
        pruned = prune(ctx, p, pr["zero_inputs"], pr["wanted_outputs"])
    return p, pruned


def save_plan(path: str, p: TransformPlan, pruned: PrunedPlan | None = None) -> None:
    with open(path, "w") as fh:
        json.dump(plan_to_dict(p, pruned), fh)


def load_plan(path: str, ctx: FieldContext | None = None):
    with open(path) as fh:
        return plan_from_dict(json.load(fh), ctx)
