"""Command-line surface: plan, cost, encode, decode, verify, bench, serve.

Every subcommand is a thin shell over the library; randomized commands are
reproducible under --seed.  Exit codes: 0 success, 1 verification or
decode failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .cfft import build_dcfft, build_scfft, eval_network, naive_dft
from .cost import (best_factorization, count, cse, horner_baseline,
                   report_table, rows_to_json)
from .errors import CcftError
from .gf import element_of_order, make_field
from .planner import eval_pruned, plan as build_plan, prune, save_plan
from .rs import (RSCodeSpec, decode as rs_decode, encode as rs_encode,
                 header_dict, horner_syndromes, read_symbols, syndromes,
                 write_symbols)

USAGE_ERROR = 2
FAILURE = 1


def _parse_int(text: str) -> int:
    return int(text, 0)


def _parse_ints(text: str) -> list[int]:
    return [int(tok, 0) for tok in text.split(",") if tok.strip()]


def _add_field_args(sp, need_n=True):
    sp.add_argument("--m", type=int, help="field extension degree")
    sp.add_argument("--prim-poly", type=_parse_int,
                    help="primitive polynomial bitmask, e.g. 0x11d")
    if need_n:
        sp.add_argument("--n", type=int, help="parent transform/code length")


def _add_code_args(sp):
    _add_field_args(sp)
    sp.add_argument("--code", type=_parse_ints, metavar="N',K'",
                    help="shortened code parameters n',k'")
    sp.add_argument("--b", type=int, default=0,
                    help="first generator root exponent")
    sp.add_argument("--factors", type=_parse_ints,
                    help="force a composite factorization, e.g. 63,65")


def _build_code(args, header=None) -> RSCodeSpec:
    """Resolve code parameters from flags and an optional stream header.

    Flags must agree with the header when both are present."""
    merged = dict(header or {})
    for flag, key in (("m", "m"), ("prim_poly", "prim_poly"), ("n", "n"),
                      ("b", "b")):
        val = getattr(args, flag, None)
        if flag == "b" and val == 0 and "b" in merged:
            continue
        if val is not None:
            if key in merged and merged[key] != val and header is not None:
                raise SystemExit(_usage(
                    f"--{flag.replace('_', '-')}={val} conflicts with "
                    f"stream header {key}={merged[key]}"))
            merged[key] = val
    code = getattr(args, "code", None)
    if code:
        if len(code) != 2:
            raise SystemExit(_usage("--code wants exactly two integers"))
        ns, ks = code
        if "n_short" in merged and header is not None and \
                (merged["n_short"], merged["k_short"]) != (ns, ks):
            raise SystemExit(_usage("--code conflicts with stream header"))
        merged["n_short"], merged["k_short"] = ns, ks
    if "m" not in merged:
        raise SystemExit(_usage("--m is required"))
    if "n_short" not in merged:
        raise SystemExit(_usage("--code n',k' is required"))
    ns, ks = merged["n_short"], merged["k_short"]
    n = merged.get("n")
    if n is None:
        ctx = make_field(merged["m"], merged.get("prim_poly"))
        n = ctx.q - 1
    k = n - (ns - ks)
    ctx = make_field(merged["m"], merged.get("prim_poly"))
    return RSCodeSpec(ctx, n, k, ns, ks, merged.get("b", 0),
                      getattr(args, "factors", None))


def _usage(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return USAGE_ERROR


def _fmt_cost(c) -> str:
    return (f"mult={c.mult} add={c.add} div={c.div} "
            f"weighted_total={c.weighted_total}")


# ---------------------------------------------------------------------------
# plan
# ---------------------------------------------------------------------------

def cmd_plan(args) -> int:
    if args.m is None or args.n is None:
        return _usage("--m and --n are required")
    ctx = make_field(args.m, args.prim_poly)
    out_path = args.out

    if args.code:
        spec = _build_code(args)
        shapes = spec.transform_shapes(args.step)
        docs = {}
        for label, zero_in, wanted, gamma in shapes:
            if args.factors:
                p = build_plan(ctx, spec.n, args.factors, gamma=gamma)
                pruned = prune(ctx, p, zero_in, wanted)
                factors = args.factors
            else:
                trace = []
                factors, pruned, _ = best_factorization(
                    ctx, spec.n, zero_in, wanted, gamma=gamma,
                    min_side=args.min_side, use_cse=args.cse, trace=trace)
                trace.sort(key=lambda fc: fc[1].weighted_total)
                for cand, cc in trace[:5]:
                    print(f"  candidate {'x'.join(map(str, cand))}: "
                          f"weighted_total={cc.weighted_total}")
            c = count(ctx, pruned, use_cse=args.cse)
            print(f"{label}: factorization "
                  f"{'x'.join(map(str, factors))}  {_fmt_cost(c)}")
            from .planner import plan_to_dict
            docs[label] = plan_to_dict(pruned.base, pruned)
        doc = docs[shapes[0][0]] if len(docs) == 1 else \
            {"step": args.step, "plans": docs}
        with open(out_path, "w") as fh:
            json.dump(doc, fh)
        print(f"wrote {out_path}")
        return 0

    if args.factors:
        p = build_plan(ctx, args.n, args.factors)
        pruned = prune(ctx, p, [], range(args.n))
        factors = args.factors
    else:
        factors, pruned, _ = best_factorization(
            ctx, args.n, [], range(args.n), min_side=args.min_side,
            use_cse=args.cse)
    c = count(ctx, pruned, use_cse=args.cse)
    print(f"factorization {'x'.join(map(str, factors))}  {_fmt_cost(c)}")
    save_plan(out_path, pruned.base, pruned)
    print(f"wrote {out_path}")
    return 0


# ---------------------------------------------------------------------------
# cost
# ---------------------------------------------------------------------------

def cmd_cost(args) -> int:
    spec = _build_code(args)
    steps = (["syndrome", "chien-forney"] if args.step == "both"
             else [args.step])
    all_rows = []
    for step in steps:
        text, rows = report_table([spec], step, min_side=args.min_side,
                                  use_cse=args.cse)
        print(text)
        print()
        all_rows.extend(rows)
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(rows_to_json(all_rows))
        print(f"wrote {args.json}")
    return 0


# ---------------------------------------------------------------------------
# encode / decode
# ---------------------------------------------------------------------------

def cmd_encode(args) -> int:
    header, symbols = read_symbols(args.infile)
    spec = _build_code(args, header)
    k = spec.k_short
    if len(symbols) % k:
        return _usage(f"input length {len(symbols)} is not a multiple of "
                      f"message size {k}")
    blocks = [symbols[i:i + k] for i in range(0, len(symbols), k)]
    out = np.concatenate([rs_encode(spec, blk) for blk in blocks]) \
        if blocks else np.zeros(0, np.int64)
    write_symbols(args.outfile, header_dict(spec), out)
    print(f"encoded {len(blocks)} block(s) -> {args.outfile}")
    return 0


def cmd_decode(args) -> int:
    header, symbols = read_symbols(args.infile)
    if header is None:
        return _usage(f"missing stream header {args.infile}.json")
    spec = _build_code(args, header)
    n = spec.n_short
    if len(symbols) % n:
        return _usage(f"input length {len(symbols)} is not a multiple of "
                      f"block size {n}")
    erasures = args.erasures or []
    blocks = [symbols[i:i + n] for i in range(0, len(symbols), n)]

    def work(blk):
        return rs_decode(spec, blk, erasures=erasures)

    if args.jobs > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(work, blocks))
    else:
        results = [work(blk) for blk in blocks]
    failed = 0
    for i, res in enumerate(results):
        print(f"block {i}: {res.status}, {len(res.positions)} errata, "
              f"divisions={res.divisions}, "
              f"combine_additions={res.combine_additions}")
        failed += res.status != "corrected"
    out = np.concatenate([r.codeword for r in results]) if results \
        else np.zeros(0, np.int64)
    write_symbols(args.outfile, header_dict(spec), out)
    print(f"wrote {args.outfile}")
    return FAILURE if failed else 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _suite_dft(args, rng) -> list[str]:
    n = args.n or 15
    m = args.m or _smallest_m(n)
    ctx = make_field(m, args.prim_poly)
    gamma = element_of_order(ctx, n)
    errors = []
    nets = [("dcfft", build_dcfft(ctx, n, gamma)),
            ("scfft", build_scfft(ctx, n, gamma))]
    for _ in range(args.trials):
        f = rng.integers(0, ctx.q, n).astype(np.int64)
        ref = naive_dft(ctx, n, gamma, f)
        for name, net in nets:
            got = eval_network(ctx, net, f)
            if not np.array_equal(got, ref):
                errors.append(f"dft {name} n={n} input={f.tolist()}")
                return errors
    for d in range(2, n):
        if n % d == 0:
            p = build_plan(ctx, n, [d, n // d])
            for _ in range(args.trials):
                f = rng.integers(0, ctx.q, n).astype(np.int64)
                if not np.array_equal(eval_plan_full(ctx, p, f),
                                      naive_dft(ctx, n, p.gamma, f)):
                    errors.append(f"dft composite {d}x{n//d} "
                                  f"input={f.tolist()}")
                    return errors
            break
    return errors


def eval_plan_full(ctx, p, f):
    from .planner import eval_plan
    return eval_plan(ctx, p, f)


def _suite_prune(args, rng) -> list[str]:
    n = args.n or 15
    m = args.m or _smallest_m(n)
    ctx = make_field(m, args.prim_poly)
    p = build_plan(ctx, n)
    errors = []
    for _ in range(args.trials):
        nz = int(rng.integers(0, n))
        nw = int(rng.integers(1, n + 1))
        zero_in = sorted(rng.choice(n, nz, replace=False).tolist())
        wanted = sorted(rng.choice(n, nw, replace=False).tolist())
        pp = prune(ctx, p, zero_in, wanted)
        f = rng.integers(0, ctx.q, n).astype(np.int64)
        f[zero_in] = 0
        ref = naive_dft(ctx, n, p.gamma, f)
        out = eval_pruned(ctx, pp, f)
        bad = [j for j in wanted if out[j] != ref[j]]
        if bad:
            errors.append(f"prune n={n} zero={zero_in} wanted={wanted} "
                          f"first bad output {bad[0]}")
            return errors
    return errors


def _suite_cse(args, rng) -> list[str]:
    n = args.n or 15
    m = args.m or _smallest_m(n)
    ctx = make_field(m, args.prim_poly)
    gamma = element_of_order(ctx, n)
    errors = []
    for build in (build_dcfft, build_scfft):
        net = build(ctx, n, gamma)
        net2 = cse(net)
        if count(ctx, net2).add > count(ctx, net).add:
            errors.append(f"cse increased additions on {build.__name__}")
            return errors
        for _ in range(args.trials):
            f = rng.integers(0, ctx.q, n).astype(np.int64)
            if not np.array_equal(eval_network(ctx, net, f),
                                  eval_network(ctx, net2, f)):
                errors.append(f"cse changed outputs on {build.__name__} "
                              f"input={f.tolist()}")
                return errors
    return errors


def _suite_decode(args, rng) -> list[str]:
    if args.code:
        spec = _build_code(args)
    else:
        spec = RSCodeSpec(make_field(4), 15, 11)
    errors = []
    msg = rng.integers(0, spec.field.q, spec.k_short).astype(np.int64)
    cw = rs_encode(spec, msg)
    if args.exhaustive_single:
        for pos in range(spec.n_short):
            for val in range(1, spec.field.q):
                r = cw.copy()
                r[pos] ^= val
                res = rs_decode(spec, r)
                if res.status != "corrected" or \
                        not np.array_equal(res.codeword, cw):
                    errors.append(f"single error pos={pos} val={val} "
                                  f"status={res.status}")
                    return errors
        return errors
    t = spec.t
    for trial in range(args.trials):
        msg = rng.integers(0, spec.field.q, spec.k_short).astype(np.int64)
        cw = rs_encode(spec, msg)
        rho = int(rng.integers(0, 2 * t + 1))
        nu = (2 * t - rho) // 2
        pos = rng.choice(spec.n_short, nu + rho, replace=False)
        r = cw.copy()
        for p_ in pos[:nu]:
            r[p_] ^= int(rng.integers(1, spec.field.q))
        for p_ in pos[nu:]:
            r[p_] = int(rng.integers(0, spec.field.q))
        res = rs_decode(spec, r, erasures=pos[nu:])
        if res.status != "corrected" or not np.array_equal(res.codeword, cw):
            errors.append(f"decode trial={trial} nu={nu} rho={rho} "
                          f"status={res.status}")
            return errors
    return errors


def _smallest_m(n: int) -> int:
    for m in range(2, 17):
        if ((1 << m) - 1) % n == 0:
            return m
    raise ValueError(f"no field GF(2^m), m<=16, contains order {n}")


def cmd_verify(args) -> int:
    suites = {"dft": _suite_dft, "prune": _suite_prune,
              "cse": _suite_cse, "decode": _suite_decode}
    names = list(suites) if args.suite == "all" else [args.suite]
    print(f"seed={args.seed} trials={args.trials}")
    failed = False
    for name in names:
        rng = np.random.default_rng(args.seed)
        errors = suites[name](args, rng)
        if errors:
            print(f"{name}: FAIL  {errors[0]}")
            failed = True
        else:
            print(f"{name}: pass ({args.trials} trials)")
    return FAILURE if failed else 0


# ---------------------------------------------------------------------------
# bench
# ---------------------------------------------------------------------------

def cmd_bench(args) -> int:
    if args.trials <= 0:
        print("backend  step  vectors/s")
        return 0
    spec = _build_code(args)
    rng = np.random.default_rng(args.seed)
    t = spec.t
    words, answers = [], []
    for _ in range(args.trials):
        msg = rng.integers(0, spec.field.q, spec.k_short).astype(np.int64)
        cw = rs_encode(spec, msg)
        r = cw.copy()
        pos = rng.choice(spec.n_short, t, replace=False)
        for p_ in pos:
            r[p_] ^= int(rng.integers(1, spec.field.q))
        words.append(r)
        answers.append(cw)
    rows = []
    synd_out = {}
    for backend, fn in (("horner", horner_syndromes), ("ccft", syndromes)):
        t0 = time.perf_counter()
        synd_out[backend] = [fn(spec, w) for w in words]
        dt = time.perf_counter() - t0
        rows.append((backend, "syndrome", args.trials / dt))
    for a, b in zip(synd_out["horner"], synd_out["ccft"]):
        if not np.array_equal(a, b):
            print("backend syndrome mismatch", file=sys.stderr)
            return FAILURE
    for backend in ("horner", "ccft"):
        bk = "plan" if backend == "ccft" else "horner"
        t0 = time.perf_counter()
        for w, cw in zip(words, answers):
            res = rs_decode(spec, w, backend=bk)
            if res.status != "corrected" or \
                    not np.array_equal(res.codeword, cw):
                print(f"bench decode failure under {backend}",
                      file=sys.stderr)
                return FAILURE
        dt = time.perf_counter() - t0
        rows.append((backend, "decode", args.trials / dt))
    print(f"{'backend':8} {'step':9} {'vectors/s':>10}")
    by = {}
    for backend, step, rate in rows:
        print(f"{backend:8} {step:9} {rate:10.1f}")
        by[(backend, step)] = rate
    for step in ("syndrome", "decode"):
        print(f"speedup {step}: "
              f"{by[('ccft', step)] / by[('horner', step)]:.2f}x")
    return 0


# ---------------------------------------------------------------------------
# serve
# ---------------------------------------------------------------------------

def cmd_serve(args) -> int:
    import uvicorn
    from .service import app
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ccft",
        description="partial composite cyclotomic Fourier transforms and "
                    "Reed-Solomon decoding over GF(2^m)")
    sub = ap.add_subparsers(dest="subcommand", required=True)

    sp = sub.add_parser("plan", help="build and serialize a transform plan")
    _add_code_args(sp)
    sp.add_argument("--step", choices=["syndrome", "chien-forney"],
                    default="syndrome")
    sp.add_argument("--min-side", type=int, default=1)
    sp.add_argument("--cse", action="store_true")
    sp.add_argument("--out", default="plan.json")
    sp.set_defaults(func=cmd_plan)

    sp = sub.add_parser("cost", help="complexity comparison table")
    _add_code_args(sp)
    sp.add_argument("--step", choices=["syndrome", "chien-forney", "both"],
                    default="both")
    sp.add_argument("--min-side", type=int, default=1)
    sp.add_argument("--cse", action="store_true")
    sp.add_argument("--json", help="also write rows as JSON")
    sp.set_defaults(func=cmd_cost)

    sp = sub.add_parser("encode", help="systematically encode symbol blocks")
    _add_code_args(sp)
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--out", dest="outfile", required=True)
    sp.set_defaults(func=cmd_encode)

    sp = sub.add_parser("decode", help="decode symbol blocks")
    _add_code_args(sp)
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--out", dest="outfile", required=True)
    sp.add_argument("--erasures", type=_parse_ints, default=[],
                    help="erasure positions applied to every block")
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(func=cmd_decode)

    sp = sub.add_parser("verify", help="run oracle suites")
    _add_code_args(sp)
    sp.add_argument("--suite",
                    choices=["dft", "prune", "cse", "decode", "all"],
                    default="all")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--trials", type=int, default=25)
    sp.add_argument("--exhaustive-single", action="store_true")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("bench", help="throughput of both backends")
    _add_code_args(sp)
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("serve", help="run the HTTP service")
    sp.add_argument("--host", default="127.0.0.1")
    sp.add_argument("--port", type=int, default=8000)
    sp.set_defaults(func=cmd_serve)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        rc = args.func(args)
    except SystemExit:
        raise
    except (CcftError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    return rc


if __name__ == "__main__":
    sys.exit(main())
