"""Arithmetic-cost accounting, greedy CSE, and comparison tables.

Counting conventions: multiplications by the constant 1 are free (this
includes unit twiddles); a binary matrix row with w ones costs w - 1
additions; divisions appear only in error-magnitude evaluation.  The
scalar figure of merit is weighted_total = (2m - 1) * mult + add, i.e. one
general multiplication trades for 2m - 1 additions.
"""

from __future__ import annotations

import heapq
import itertools
import json
from dataclasses import dataclass

import numpy as np

from .cfft import BilinearNetwork, XorProgram, network_counts
from .gf import FieldContext
from .planner import PrunedPlan, TransformPlan, plan as build_plan, prune


@dataclass(frozen=True)
class CostReport:
    mult: int
    add: int
    div: int
    weighted_total: int

    @staticmethod
    def of(m: int, mult: int, add: int, div: int = 0) -> "CostReport":
        return CostReport(mult, add, div, (2 * m - 1) * mult + add)

    def __add__(self, other: "CostReport") -> "CostReport":
        return CostReport(self.mult + other.mult, self.add + other.add,
                          self.div + other.div,
                          self.weighted_total + other.weighted_total)


ZERO_COST = CostReport(0, 0, 0, 0)


def _matrix_add_count(mat: np.ndarray) -> int:
    rw = mat.sum(axis=1, dtype=np.int64)
    return int(rw.sum() - np.count_nonzero(rw))


def count(ctx: FieldContext, obj, use_cse: bool = False) -> CostReport:
    """Cost of evaluating a network, full plan, or pruned plan."""
    m = ctx.m
    if isinstance(obj, BilinearNetwork):
        mult, add = network_counts(obj)
        if use_cse and obj.pre_program is None and obj.post_program is None:
            add = (_cse_add_count(obj.pre_matrix)
                   + _cse_add_count(obj.post_matrix))
        return CostReport.of(m, mult, add)
    if isinstance(obj, TransformPlan):
        mult = add = 0
        for inst in obj.instances:
            im, ia = network_counts(inst.net)
            if use_cse:
                ia = (_cse_add_count(inst.net.pre_matrix)
                      + _cse_add_count(inst.net.post_matrix))
            mult += im
            add += ia
        mult += sum(1 for _, _, c in obj.twiddles if c != 1)
        return CostReport.of(m, mult, add)
    if isinstance(obj, PrunedPlan):
        mult = add = 0
        live_tw = {item for k, item in obj.live_steps if k == "tw"}
        for kind, item in obj.live_steps:
            if kind == "net":
                mult += int(np.count_nonzero(item.constants != 1))
                if use_cse:
                    add += _cse_add_count(item.pre) + _cse_add_count(item.post)
                else:
                    add += _matrix_add_count(item.pre) + _matrix_add_count(item.post)
            else:
                if obj.base.twiddles[item][2] != 1:
                    mult += 1
        return CostReport.of(m, mult, add)
    raise TypeError(f"cannot count {type(obj).__name__}")


# ---------------------------------------------------------------------------
# greedy common-subexpression elimination on binary matrices
# ---------------------------------------------------------------------------

def cse_matrix(mat: np.ndarray) -> XorProgram:
    """Greedy two-term CSE: repeatedly factor out the most frequent column
    pair, lowest-index pair on ties, until no pair occurs twice."""
    n_cols = mat.shape[1]
    rows: list[set[int]] = [set(np.flatnonzero(r).tolist()) for r in mat]
    occur: dict[int, set[int]] = {}          # term -> row ids
    for ri, row in enumerate(rows):
        for t in row:
            occur.setdefault(t, set()).add(ri)
    pair_count: dict[tuple[int, int], int] = {}
    for row in rows:
        for a, b in itertools.combinations(sorted(row), 2):
            pair_count[(a, b)] = pair_count.get((a, b), 0) + 1
    # lazy max-heap: entries may be stale, validate against pair_count on pop
    heap = [(-c, p) for p, c in pair_count.items() if c >= 2]
    heapq.heapify(heap)

    ops: list[tuple[int, int]] = []
    next_term = n_cols

    def bump(a: int, b: int, delta: int) -> None:
        key = (a, b) if a < b else (b, a)
        c = pair_count.get(key, 0) + delta
        if c:
            pair_count[key] = c
            if delta > 0 and c >= 2:
                heapq.heappush(heap, (-c, key))
        else:
            pair_count.pop(key, None)

    while heap:
        negc, (a, b) = heapq.heappop(heap)
        cur = pair_count.get((a, b), 0)
        if cur != -negc:
            if cur >= 2:
                heapq.heappush(heap, (-cur, (a, b)))  # refresh stale entry
            continue
        new_t = next_term
        next_term += 1
        ops.append((a, b))
        hit = occur[a] & occur[b]
        for ri in hit:
            row = rows[ri]
            for t in (a, b):
                for other in row:
                    if other != t:
                        bump(t, other, -1)
                row.discard(t)
                occur[t].discard(ri)
            for other in row:
                bump(new_t, other, +1)
            row.add(new_t)
            occur.setdefault(new_t, set()).add(ri)

    outputs = []
    for row in rows:
        if not row:
            outputs.append(-1)
        elif len(row) == 1:
            outputs.append(next(iter(row)))
        else:
            # chain the remaining terms; each link is one more op
            terms = sorted(row)
            acc = terms[0]
            for t in terms[1:]:
                ops.append((acc, t))
                acc = next_term
                next_term += 1
            outputs.append(acc)
    return XorProgram(n_cols, tuple(ops), tuple(outputs))


_CSE_CACHE: dict[bytes, int] = {}


def _cse_add_count(mat: np.ndarray) -> int:
    key = (mat.shape[0].to_bytes(4, "little")
           + mat.shape[1].to_bytes(4, "little")
           + np.packbits(mat).tobytes())
    cached = _CSE_CACHE.get(key)
    if cached is None:
        cached = cse_matrix(mat).add_count
        _CSE_CACHE[key] = cached
    return cached


def cse(network: BilinearNetwork) -> BilinearNetwork:
    """Restructured network computing the identical map with shared sums."""
    return BilinearNetwork(
        network.n_in, network.n_out,
        network.pre_matrix, network.constants, network.post_matrix,
        network.input_perm,
        pre_program=cse_matrix(network.pre_matrix),
        post_program=cse_matrix(network.post_matrix),
    )


# ---------------------------------------------------------------------------
# baselines and search
# ---------------------------------------------------------------------------

def horner_baseline(spec, step: str) -> CostReport:
    """Horner's-rule cost for one decoder step of an RS code spec.

    Syndromes: 2t evaluations of the received polynomial (degree n'-1);
    the j = 0 evaluation multiplies by 1 throughout and is free of general
    multiplications.  Chien/Forney: the evaluator is evaluated only at the
    at most 2t candidate roots; the even/odd locator parts are polynomials
    in x^2 evaluated at all n' points, plus n' combine additions and at
    most 2t divisions."""
    m = spec.field.m
    t, two_t, np_ = spec.t, 2 * spec.t, spec.n_short
    if step == "syndrome":
        if t == 0:
            return ZERO_COST
        return CostReport.of(m, (two_t - 1) * (np_ - 1), two_t * (np_ - 1))
    if step == "chien-forney":
        if t == 0:
            return ZERO_COST
        omega = CostReport.of(m, two_t * (two_t - 1), two_t * (two_t - 1))
        lam_e = CostReport.of(m, (np_ - 1) * t, np_ * t)
        lam_o = CostReport.of(m, (np_ - 1) * t, np_ * (t - 1))
        misc = CostReport.of(m, 0, np_, div=two_t)
        return omega + lam_e + lam_o + misc
    raise ValueError(f"unknown step {step!r}")


def _ordered_factor_pairs(n: int) -> list[tuple[int, int]]:
    out = []
    for d in range(2, n):
        if n % d == 0:
            out.append((d, n // d))
    return out


def best_factorization(ctx: FieldContext, n: int, zero_inputs, wanted_outputs,
                       forms=None, gamma: int | None = None,
                       min_side: int = 1, use_cse: bool = False,
                       trace: list | None = None):
    """Search ordered two-way splits (with one recursive refinement of the
    second side) for the lowest weighted total after pruning.

    Returns (factors, PrunedPlan, CostReport).  min_side skips extremely
    lopsided splits, which are never competitive for long transforms.
    When trace is a list, every evaluated (factors, CostReport) candidate
    is appended to it."""
    zero_inputs = list(zero_inputs)
    wanted_outputs = list(wanted_outputs)

    def evaluate(factors):
        p = build_plan(ctx, n, factors, forms=forms, gamma=gamma)
        pp = prune(ctx, p, zero_inputs, wanted_outputs)
        cost_ = count(ctx, pp, use_cse=use_cse)
        if trace is not None:
            trace.append((factors, cost_))
        return pp, cost_

    best = None
    for n1, n2 in _ordered_factor_pairs(n):
        if min(n1, n2) < min_side:
            continue
        pp, cost_ = evaluate([n1, n2])
        if best is None or cost_.weighted_total < best[2].weighted_total:
            best = ([n1, n2], pp, cost_)
    if best is None:
        pp, cost_ = evaluate([n])
        return [n], pp, cost_
    # one refinement pass: try splitting the trailing factor further
    n1, n2 = best[0]
    for d in range(2, n2):
        if n2 % d == 0 and min(d, n2 // d) >= min_side:
            pp, cost_ = evaluate([n1, d, n2 // d])
            if cost_.weighted_total < best[2].weighted_total:
                best = ([n1, d, n2 // d], pp, cost_)
    return best


def report_table(specs: list, step: str, min_side: int = 1,
                 use_cse: bool = False) -> tuple[str, list[dict]]:
    """Per-code comparison of partial CCFT (best found factorization),
    single-tier partial CFFT, and the Horner baseline.

    Returns (aligned text, machine-readable rows)."""
    rows = []
    for spec in specs:
        ctx = spec.field
        shapes = spec.transform_shapes(step)
        misc = (CostReport.of(ctx.m, 0, spec.n_short, div=2 * spec.t)
                if step == "chien-forney" else ZERO_COST)
        methods = []
        total = ZERO_COST
        shape_names = []
        for _, zero_in, wanted, gamma in shapes:
            factors, _, c = best_factorization(
                ctx, spec.n, zero_in, wanted, gamma=gamma,
                min_side=min_side, use_cse=use_cse)
            total = total + c
            shape_names.append("x".join(map(str, factors)))
        methods.append(("partial-ccft", "|".join(sorted(set(shape_names))),
                        total + misc))
        total = ZERO_COST
        for _, zero_in, wanted, gamma in shapes:
            single = prune(ctx, build_plan(ctx, spec.n, [spec.n], gamma=gamma),
                           zero_in, wanted)
            total = total + count(ctx, single, use_cse=use_cse)
        methods.append(("partial-cfft", str(spec.n), total + misc))
        methods.append(("horner", "-", horner_baseline(spec, step)))
        for name, shape, c in methods:
            rows.append({
                "code": f"({spec.n_short},{spec.k_short})",
                "field": f"GF(2^{ctx.m})",
                "step": step,
                "method": name,
                "factorization": shape,
                "mult": c.mult,
                "add": c.add,
                "div": c.div,
                "total": c.weighted_total,
            })
    header = ["code", "field", "method", "factorization", "mult", "add", "div", "total"]
    widths = {h: max([len(h)] + [len(str(r[h])) for r in rows]) for h in header}
    lines = ["  ".join(h.ljust(widths[h]) for h in header)]
    for r in rows:
        lines.append("  ".join(str(r[h]).ljust(widths[h]) for h in header))
    return "\n".join(lines), rows


def rows_to_json(rows: list[dict]) -> str:
    return json.dumps(rows, indent=2)
