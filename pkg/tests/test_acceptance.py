"""End-to-end acceptance checks.

Each test prints one pass/fail line so the whole gate is readable from
the pytest -v output alone.  Oracles are the naive O(n^2) DFT and the
direct (Horner-style) polynomial evaluations; no expected value below is
taken from the implementation under test.
"""

import time

import numpy as np
import pytest

from ccft.cfft import eval_network, naive_dft
from ccft.cost import (CostReport, best_factorization, count, cse,
                       horner_baseline)
from ccft.gf import make_field
from ccft.planner import eval_plan, eval_pruned, plan, prune
from ccft.rs import decode, encode, horner_syndromes, make_code, syndromes


def report(name, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] {name}"
    if detail:
        line += f"  ({detail})"
    print(line)
    assert ok, line


# one field context per extension degree, shared across criteria
_FIELDS = {}


def field(m):
    if m not in _FIELDS:
        _FIELDS[m] = make_field(m)
    return _FIELDS[m]


# factorizations exercised per length; (m, n, list of factor tuples)
TRANSFORM_CASES = [
    (4, 3, [(3,)]),
    (4, 5, [(5,)]),
    (4, 15, [(15,), (3, 5), (5, 3)]),
    (6, 63, [(63,), (7, 9), (9, 7), (3, 21)]),
    (12, 65, [(65,), (5, 13)]),
    (8, 255, [(3, 85), (15, 17), (5, 51)]),
    (9, 511, [(7, 73)]),
    (10, 1023, [(31, 33), (33, 31), (11, 93)]),
]


def iter_plans():
    for m, n, factor_lists in TRANSFORM_CASES:
        ctx = field(m)
        for factors in factor_lists:
            for forms in (("dcfft",) * len(factors),
                          ("scfft",) * len(factors)):
                yield ctx, n, list(factors), forms


def test_criterion_1_weighted_total_identities():
    cases = [
        (252, 2652, 8, 6432),
        (873, 7268, 9, 22109),
        (2868, 18569, 10, 73061),
        (7565, 63869, 12, 237864),
        (9268, 82684, 12, 295848),
        (252, 2764, 8, 6544),
    ]
    bad = [(mult, add, m) for mult, add, m, total in cases
           if CostReport.of(m, mult, add).weighted_total != total]
    report("criterion 1: weighted-total identities", not bad,
           f"{len(cases)} published totals reproduced exactly")


def test_criterion_2_transform_correctness():
    t0 = time.time()
    rng = np.random.default_rng(2024)
    checked = 0
    for ctx, n, factors, forms in iter_plans():
        p = plan(ctx, n, factors, forms=forms)
        f = rng.integers(0, ctx.q, (n, 10)).astype(np.int64)
        ok = np.array_equal(eval_plan(ctx, p, f), naive_dft(ctx, n, p.gamma, f))
        if not ok:
            report("criterion 2: transform correctness", False,
                   f"n={n} factors={factors} forms={forms}")
        checked += 1
    ctx = field(12)
    p = plan(ctx, 4095, [63, 65])
    f = rng.integers(0, 4096, (4095, 3)).astype(np.int64)
    ok = np.array_equal(eval_plan(ctx, p, f),
                        naive_dft(ctx, 4095, p.gamma, f))
    elapsed = time.time() - t0
    report("criterion 2: transform correctness", ok and elapsed < 120,
           f"{checked} plans x 10 vectors + 4095 x 3, {elapsed:.1f}s")


def test_criterion_3_pruning_soundness():
    rng = np.random.default_rng(3)
    cases = [(4, 15, (3, 5)), (6, 63, (7, 9)), (8, 255, (15, 17))]
    total = 0
    for m, n, factors in cases:
        ctx = field(m)
        p = plan(ctx, n, list(factors))
        for _ in range(50):
            zero_in = sorted(rng.choice(
                n, int(rng.integers(0, n)), replace=False).tolist())
            wanted = sorted(rng.choice(
                n, int(rng.integers(1, n + 1)), replace=False).tolist())
            pp = prune(ctx, p, zero_in, wanted)
            f = rng.integers(0, ctx.q, n).astype(np.int64)
            f[zero_in] = 0
            ref = naive_dft(ctx, n, p.gamma, f)
            out = eval_pruned(ctx, pp, f)
            if any(out[j] != ref[j] for j in wanted):
                report("criterion 3: pruning soundness", False,
                       f"n={n} zero={zero_in} wanted={wanted}")
            total += 1
    # structural claim: 15 = 3 x 5, wanted {0,1} kills a second-tier module
    ctx = field(4)
    p = plan(ctx, 15, [3, 5], forms=("scfft", "scfft"))
    pp = prune(ctx, p, [], [0, 1])
    dead = [i for i in range(len(p.instances))
            if pp.live_instance_for(i) is None]
    structural = (len(dead) == 1 and p.instances[dead[0]].net.n_in == 5)
    report("criterion 3: pruning soundness", structural,
           f"{total} random prunings exact; dead second-tier module {dead}")


def _corrupt(rng, spec, cw, nu, rho):
    pos = rng.choice(spec.n_short, nu + rho, replace=False)
    r = cw.copy()
    for p in pos[:nu]:
        r[p] ^= int(rng.integers(1, spec.field.q))
    for p in pos[nu:]:
        r[p] = int(rng.integers(0, spec.field.q))
    return r, sorted(int(p) for p in pos[nu:])


def _trial_block(rng, spec, nu, rho, counters):
    msg = rng.integers(0, spec.field.q, spec.k_short).astype(np.int64)
    cw = encode(spec, msg)
    r, erasures = _corrupt(rng, spec, cw, nu, rho)
    res = decode(spec, r, erasures=erasures)
    counters.append(res)
    return res.status == "corrected" and np.array_equal(res.codeword, cw)


def test_criterion_4_and_7_decoder_round_trip():
    t0 = time.time()
    rng = np.random.default_rng(4)
    counters = []
    failures = []

    code15 = make_code(field(4), 15, 11)
    msg = rng.integers(0, 16, 11).astype(np.int64)
    cw = encode(code15, msg)
    singles = doubles = 0
    for pos in range(15):
        for val in range(1, 16):
            r = cw.copy()
            r[pos] ^= val
            res = decode(code15, r)
            counters.append(res)
            if res.status != "corrected" or not np.array_equal(res.codeword, cw):
                failures.append(f"(15,11) single pos={pos} val={val}")
            singles += 1
    for p1 in range(15):
        for p2 in range(p1 + 1, 15):
            for v1, v2 in ((1, 1), (7, 3),
                           (int(rng.integers(1, 16)), int(rng.integers(1, 16)))):
                r = cw.copy()
                r[p1] ^= v1
                r[p2] ^= v2
                res = decode(code15, r)
                counters.append(res)
                if res.status != "corrected" or \
                        not np.array_equal(res.codeword, cw):
                    failures.append(f"(15,11) double {p1},{p2} {v1},{v2}")
                doubles += 1
    # errors-and-erasures at full capability, 2 nu + rho = 2t
    for rho in range(0, 2 * code15.t + 1, 2):
        nu = (2 * code15.t - rho) // 2
        for _ in range(25):
            if not _trial_block(rng, code15, nu, rho, counters):
                failures.append(f"(15,11) nu={nu} rho={rho}")

    code255 = make_code(field(8), 255, 223)
    for _ in range(1000):
        if not _trial_block(rng, code255, 16, 0, counters):
            failures.append("(255,223) nu=16")
    for rho in (2, 16, 32):
        nu = (2 * code255.t - rho) // 2
        for _ in range(25):
            if not _trial_block(rng, code255, nu, rho, counters):
                failures.append(f"(255,223) nu={nu} rho={rho}")

    big = make_code(field(12), 4095, 4095 - 170, n_short=2720, k_short=2550)
    for _ in range(100):
        if not _trial_block(rng, big, 85, 0, counters):
            failures.append("(2720,2550) nu=85")
    for rho in (10, 170):
        nu = (2 * big.t - rho) // 2
        for _ in range(10):
            if not _trial_block(rng, big, nu, rho, counters):
                failures.append(f"(2720,2550) nu={nu} rho={rho}")

    elapsed = time.time() - t0
    report("criterion 4: decoder round trip",
           not failures and elapsed < 300,
           f"{singles} singles, {doubles * 3} doubles, randomized trials, "
           f"{elapsed:.1f}s" + (f"; first failure {failures[0]}"
                                if failures else ""))

    specs = {15: code15, 255: code255, 2720: big}
    bound_ok = all(
        res.divisions <= 2 * specs[len(res.codeword)].t and
        res.combine_additions in (0, len(res.codeword))
        for res in counters)
    exact_ok = all(res.combine_additions == len(res.codeword)
                   for res in counters if res.divisions > 0)
    report("criterion 7: division/addition bounds",
           bound_ok and exact_ok,
           f"{len(counters)} decodes instrumented")


def test_criterion_5_backend_equivalence():
    rng = np.random.default_rng(5)
    codes = [
        make_code(field(4), 15, 11),
        make_code(field(8), 255, 223),
        make_code(field(12), 4095, 4095 - 170, n_short=2720, k_short=2550),
    ]
    for spec in codes:
        words = rng.integers(0, spec.field.q,
                             (spec.n_short, 1000)).astype(np.int64)
        a = syndromes(spec, words)
        b = horner_syndromes(spec, words)
        if not np.array_equal(a, b):
            report("criterion 5: backend equivalence", False,
                   f"({spec.n_short},{spec.k_short})")
    report("criterion 5: backend equivalence", True,
           "1000 words per code, exact")


def test_criterion_6_complexity_dominance():
    ctx12 = field(12)
    big = make_code(ctx12, 4095, 4095 - 170, n_short=2720, k_short=2550)
    _, _, c_big = best_factorization(
        ctx12, 4095, range(2720, 4095), range(170), min_side=35)
    h_big = horner_baseline(big, "syndrome")
    ratio_big = c_big.weighted_total / h_big.weighted_total

    ctx8 = field(8)
    code255 = make_code(ctx8, 255, 223)
    _, _, c_255 = best_factorization(ctx8, 255, [], range(32))
    h_255 = horner_baseline(code255, "syndrome")
    ratio_255 = c_255.weighted_total / h_255.weighted_total

    report("criterion 6: complexity dominance",
           ratio_big <= 0.25 and ratio_255 <= 0.60,
           f"(2720,2550) {ratio_big:.1%} of Horner (cap 25%), "
           f"(255,223) {ratio_255:.1%} (cap 60%)")


def test_criterion_8_cse_safety():
    rng = np.random.default_rng(8)
    seen = set()
    checked = 0
    for ctx, n, factors, forms in iter_plans():
        p = plan(ctx, n, factors, forms=forms)
        for inst in p.instances:
            net = inst.net
            key = id(net)
            if key in seen:
                continue
            seen.add(key)
            net2 = cse(net)
            f = rng.integers(0, ctx.q, (net.n_in, 100)).astype(np.int64)
            if not np.array_equal(eval_network(ctx, net, f),
                                  eval_network(ctx, net2, f)):
                report("criterion 8: cse safety", False,
                       f"semantics changed, leaf n={net.n_in}")
            if count(ctx, net2).add > count(ctx, net).add:
                report("criterion 8: cse safety", False,
                       f"additions increased, leaf n={net.n_in}")
            checked += 1
    report("criterion 8: cse safety", True,
           f"{checked} distinct leaf networks, 100 vectors each")
