import itertools
import math
import random

import pytest

from entroute.chainopt import (Chain, PurificationPlan,
                               enumerate_segmentations, evaluate_plan,
                               no_purification_plan, optimize_chain)
from entroute.purify import (circuit_for, evaluate_circuit, oracle_simulate_step,
                             post_purification_rate)
from entroute.werner import NoiseParams, PERFECT, distillable, swap_fidelity

NOISY = NoiseParams(0.99, 0.99)


def _brute_force_segmentations(n):
    # Independent iterative enumeration with dedup, for cross-checking.
    partial = [()]
    complete = set()
    while partial:
        prefix = partial.pop()
        total = sum(prefix)
        if total == n:
            complete.add(prefix)
            continue
        for part in (1, 2, 3):
            if total + part <= n:
                partial.append(prefix + (part,))
    return complete


def test_segmentation_counts_follow_tribonacci():
    counts = [len(enumerate_segmentations(n)) for n in range(1, 11)]
    assert counts == [1, 2, 4, 7, 13, 24, 44, 81, 149, 274]


def test_segmentations_small_cases():
    assert enumerate_segmentations(1) == ((1,),)
    assert set(enumerate_segmentations(3)) == {(1, 1, 1), (1, 2), (2, 1), (3,)}


def test_segmentations_match_brute_force():
    for n in (4, 5, 6):
        got = enumerate_segmentations(n)
        assert len(got) == len(set(got))  # no duplicates
        assert set(got) == _brute_force_segmentations(n)


def test_segmentations_domain_errors():
    with pytest.raises(ValueError):
        enumerate_segmentations(0)
    with pytest.raises(ValueError):
        enumerate_segmentations(11)


def test_evaluate_plan_two_hop_raw_swap():
    # Hand-composed swap-chain fidelity plus hashing bound.
    chain = Chain((20, 20), (0.99, 0.99))
    evaluation = evaluate_plan(chain, PurificationPlan(((2, 1),)))
    w = (4 * 0.99 - 1) / 3
    fid = 0.25 + 0.75 * w * w
    d = 20 * (1 + fid * math.log2(fid) + (1 - fid) * math.log2((1 - fid) / 3))
    assert evaluation.final_fidelity == pytest.approx(fid, abs=1e-12)
    assert evaluation.rate == 20.0
    assert evaluation.d_total == pytest.approx(d, abs=1e-9)


def test_all_k1_plans_agree_across_segmentations():
    rng = random.Random(3)
    for _ in range(20):
        n = rng.randint(2, 7)
        chain = Chain(
            tuple(rng.randint(8, 32) for _ in range(n)),
            tuple(rng.uniform(0.85, 0.999) for _ in range(n)),
            NOISY if rng.random() < 0.5 else PERFECT,
        )
        reference = evaluate_plan(chain, no_purification_plan(n))
        for seg_lens in enumerate_segmentations(n):
            plan = PurificationPlan(tuple((h, 1) for h in seg_lens))
            other = evaluate_plan(chain, plan)
            assert other.final_fidelity == pytest.approx(reference.final_fidelity, abs=1e-12)
            assert other.rate == reference.rate
            assert other.d_total == pytest.approx(reference.d_total, abs=1e-12)


def test_single_hop_k8_plan_matches_oracle_fold():
    chain = Chain((8,), (0.7,))
    evaluation = evaluate_plan(chain, PurificationPlan(((1, 8),)))
    # Fold the density-matrix oracle over the balanced k=8 tree.
    f, p = 0.7, 1.0
    for _ in range(3):
        step = oracle_simulate_step(f, f)
        p = p * p * step.p_succ
        f = step.f_out
    assert evaluation.final_fidelity == pytest.approx(f, abs=1e-9)
    assert evaluation.rate == pytest.approx(p * 1, abs=1e-9)


def test_evaluate_plan_rejects_bad_partition():
    chain = Chain((20, 20), (0.99, 0.99))
    with pytest.raises(ValueError):
        evaluate_plan(chain, PurificationPlan(((3, 1),)))
    with pytest.raises(ValueError):
        evaluate_plan(chain, PurificationPlan(((1, 1),)))


def test_plan_validation():
    with pytest.raises(ValueError):
        PurificationPlan(())
    with pytest.raises(ValueError):
        PurificationPlan(((4, 1),))
    with pytest.raises(ValueError):
        PurificationPlan(((2, 9),))
    assert PurificationPlan(((3, 8), (2, 1))).summary() == "3:8+2:1"


def test_chain_validation():
    with pytest.raises(ValueError):
        Chain((), ())
    with pytest.raises(ValueError):
        Chain((10,), (0.9, 0.9))
    with pytest.raises(ValueError):
        Chain((0,), (0.9,))
    with pytest.raises(ValueError):
        Chain((10,), (0.1,))


def test_optimize_perfect_link_needs_no_purification():
    plan, evaluation = optimize_chain(Chain((16,), (1.0,)))
    assert plan.segments == ((1, 1),)
    assert evaluation.final_fidelity == 1.0
    assert evaluation.rate == 16.0


def test_optimize_single_hop_matches_brute_force_over_k():
    chain = Chain((8,), (0.85,))
    plan, evaluation = optimize_chain(chain)
    best = max(
        (evaluate_plan(chain, PurificationPlan(((1, k),))).d_total, k)
        for k in range(1, 9)
    )
    assert evaluation.d_total == best[0]


def test_optimize_matches_small_instance_brute_force():
    rng = random.Random(11)
    for trial in range(60):
        n = rng.randint(1, 3)
        chain = Chain(
            tuple(rng.randint(1, 32) for _ in range(n)),
            tuple(round(rng.uniform(0.75, 0.999), 6) for _ in range(n)),
            PERFECT if trial % 2 == 0 else NOISY,
        )
        _, evaluation = optimize_chain(chain, max_k=4)
        best = max(
            evaluate_plan(chain, PurificationPlan(tuple(zip(seg_lens, ks)))).d_total
            for seg_lens in enumerate_segmentations(n)
            for ks in itertools.product(range(1, 5), repeat=len(seg_lens))
        )
        assert evaluation.d_total == best


def test_optimize_rejects_long_chains():
    with pytest.raises(ValueError):
        optimize_chain(Chain((10,) * 11, (0.95,) * 11))


def test_bottleneck_law():
    chain = Chain((8, 30, 14), (0.92, 0.95, 0.9), NOISY)
    for seg_lens in enumerate_segmentations(3):
        for ks in itertools.product((1, 3, 8), repeat=len(seg_lens)):
            plan = PurificationPlan(tuple(zip(seg_lens, ks)))
            evaluation = evaluate_plan(chain, plan)
            rates = []
            start = 0
            for hops, k in plan.segments:
                f_seg = swap_fidelity(chain.fidelities[start:start + hops], chain.noise)
                outcome = evaluate_circuit(circuit_for(k), f_seg, chain.noise)
                rates.append(post_purification_rate(
                    min(chain.egrs[start:start + hops]), circuit_for(k), outcome))
                start += hops
            assert evaluation.rate == min(rates)
            assert evaluation.d_total <= distillable(min(rates), 1.0) + 1e-12


def test_optimizer_dominates_baselines():
    rng = random.Random(5)
    for _ in range(15):
        n = rng.randint(2, 6)
        chain = Chain(
            tuple(rng.randint(8, 32) for _ in range(n)),
            tuple(rng.uniform(0.85, 0.99) for _ in range(n)),
            NOISY if rng.random() < 0.5 else PERFECT,
        )
        _, evaluation = optimize_chain(chain)
        no_pur = evaluate_plan(chain, no_purification_plan(n))
        all_k8 = evaluate_plan(chain, PurificationPlan(tuple((1, 8) for _ in range(n))))
        assert evaluation.d_total >= no_pur.d_total
        assert evaluation.d_total >= all_k8.d_total


def test_noise_strictly_degrades_multi_hop_fidelity():
    for n in (2, 4, 6):
        chain_ideal = Chain((20,) * n, (0.96,) * n, PERFECT)
        chain_noisy = Chain((20,) * n, (0.96,) * n, NOISY)
        plan = no_purification_plan(n)
        assert evaluate_plan(chain_noisy, plan).final_fidelity < \
            evaluate_plan(chain_ideal, plan).final_fidelity


def test_optimize_tie_breaks_are_deterministic():
    chain = Chain((20, 20), (1.0, 1.0))
    plan, evaluation = optimize_chain(chain)
    # Perfect links: every k=1 plan ties at fidelity 1; fewest segments wins.
    assert evaluation.final_fidelity == 1.0
    assert plan.segments == ((2, 1),)
