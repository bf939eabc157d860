import numpy as np
import pytest

from ccft.cfft import naive_dft
from ccft.errors import BadFactorization, PrecisionViolation
from ccft.gf import element_of_order, make_field
from ccft.planner import (choose_forms, eval_plan, eval_pruned, plan,
                          plan_from_dict, plan_to_dict, prune)


@pytest.mark.parametrize("m,n,factors", [
    (4, 15, [3, 5]),
    (4, 15, [5, 3]),
    (4, 15, [15]),
    (6, 9, [3, 3]),       # non-coprime split, twiddles required
    (6, 63, [7, 9]),
    (6, 63, [9, 7]),
    (6, 63, [3, 21]),
    (12, 45, [9, 5]),
])
def test_composite_plan_matches_naive(m, n, factors):
    ctx = make_field(m)
    p = plan(ctx, n, factors)
    rng = np.random.default_rng(n * 31 + len(factors))
    f = rng.integers(0, ctx.q, (n, 8)).astype(np.int64)
    assert np.array_equal(eval_plan(ctx, p, f), naive_dft(ctx, n, p.gamma, f))


@pytest.mark.parametrize("forms", [("dcfft", "dcfft"), ("scfft", "scfft"),
                                   ("dcfft", "scfft")])
def test_plan_forms(forms):
    ctx = make_field(4)
    p = plan(ctx, 15, [3, 5], forms=forms)
    rng = np.random.default_rng(7)
    f = rng.integers(0, 16, (15, 5)).astype(np.int64)
    assert np.array_equal(eval_plan(ctx, p, f), naive_dft(ctx, 15, p.gamma, f))


def test_scenario_form_selection():
    assert choose_forms("freq-partial") == ("scfft", "scfft")
    assert choose_forms("time-partial") == ("dcfft", "dcfft")
    assert choose_forms("both") == ("dcfft", "scfft")
    with pytest.raises(ValueError):
        choose_forms("neither")


def test_bad_factorization_rejected():
    ctx = make_field(4)
    with pytest.raises(BadFactorization):
        plan(ctx, 15, [3, 4])
    with pytest.raises(BadFactorization):
        plan(ctx, 15, [3, 5, 2])


def test_pruning_soundness_random():
    ctx = make_field(6)
    p = plan(ctx, 63, [7, 9])
    rng = np.random.default_rng(63)
    for _ in range(20):
        zero_in = sorted(rng.choice(63, int(rng.integers(0, 40)),
                                    replace=False).tolist())
        wanted = sorted(rng.choice(63, int(rng.integers(1, 30)),
                                   replace=False).tolist())
        pp = prune(ctx, p, zero_in, wanted)
        f = rng.integers(0, 64, 63).astype(np.int64)
        f[zero_in] = 0
        ref = naive_dft(ctx, 63, p.gamma, f)
        out = eval_pruned(ctx, pp, f)
        assert set(out) == set(wanted)
        for j in wanted:
            assert out[j] == ref[j]


def test_pruning_noop_keeps_everything():
    ctx = make_field(4)
    p = plan(ctx, 15, [3, 5])
    pp = prune(ctx, p, [], range(15))
    assert len(pp.live_instances) == len(p.instances)


def test_pruning_monotone_cost():
    from ccft.cost import count
    ctx = make_field(6)
    p = plan(ctx, 63, [7, 9])
    full = count(ctx, prune(ctx, p, [], range(63)))
    partial = count(ctx, prune(ctx, p, range(32, 63), range(16)))
    assert partial.weighted_total < full.weighted_total


def test_second_tier_module_eliminated_for_two_outputs():
    # 15 = 3 x 5, wanted outputs {0, 1}: one of the three second-tier
    # 5-point modules computes nothing that is still needed
    ctx = make_field(4)
    p = plan(ctx, 15, [3, 5], forms=("scfft", "scfft"))
    pp = prune(ctx, p, [], [0, 1])
    dead = [i for i in range(len(p.instances))
            if pp.live_instance_for(i) is None]
    second_tier = [i for i in range(len(p.instances))
                   if p.instances[i].net.n_in == 5]
    assert len(dead) == 1 and dead[0] in second_tier


def test_pruned_eval_rejects_nonzero_declared_input():
    ctx = make_field(4)
    p = plan(ctx, 15, [3, 5])
    pp = prune(ctx, p, [12, 13, 14], range(4))
    f = np.zeros(15, np.int64)
    f[12] = 3
    with pytest.raises(PrecisionViolation):
        eval_pruned(ctx, pp, f)


def test_serialization_round_trip(tmp_path):
    from ccft.planner import load_plan, save_plan
    ctx = make_field(4)
    p = plan(ctx, 15, [3, 5])
    pp = prune(ctx, p, [11, 12, 13, 14], range(4))
    path = str(tmp_path / "plan.json")
    save_plan(path, p, pp)
    p2, pp2 = load_plan(path)
    rng = np.random.default_rng(1)
    f = rng.integers(0, 16, 15).astype(np.int64)
    f[11:] = 0
    out1 = eval_pruned(ctx, pp, f)
    out2 = eval_pruned(p2.ctx, pp2, f)
    assert out1 == out2
    # bit-exact round trip of the document itself
    doc = plan_to_dict(p, pp)
    doc2 = plan_to_dict(p2, pp2)
    assert doc == doc2


def test_twiddle_plan_serialization(tmp_path):
    from ccft.planner import load_plan, save_plan
    ctx = make_field(6)
    p = plan(ctx, 9, [3, 3])
    pp = prune(ctx, p, [], range(9))
    path = str(tmp_path / "plan9.json")
    save_plan(path, p, pp)
    p2, pp2 = load_plan(path)
    f = np.arange(9, dtype=np.int64)
    assert eval_pruned(ctx, pp, f) == eval_pruned(p2.ctx, pp2, f)
