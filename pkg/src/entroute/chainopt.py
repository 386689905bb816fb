"""Purification-plan optimization for a fixed repeater chain.

A chain is segmented into contiguous runs of at most three hops; each
segment first swaps its raw links into one longer pair per raw round, then
applies a k-to-1 purification circuit, and finally all segment outputs are
swapped end to end. The optimizer enumerates every segmentation and, within
each, relaxes circuit selectivity downwards from k = 8 on the rate
bottleneck until no purification remains, keeping the best plan seen by
distillable entanglement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .netgraph import Network
from .purify import circuit_for, evaluate_circuit, post_purification_rate
from .werner import (NoiseParams, PERFECT, check_fidelity, distillable,
                     distillable_per_pair, fidelity_to_w, swap_fidelity)

MAX_CHAIN_HOPS = 10
MAX_SEGMENT_HOPS = 3


@dataclass(frozen=True)
class Chain:
    """A path of repeaters: per-hop raw EGRs and fidelities plus the noise model."""

    egrs: tuple[int, ...]
    fidelities: tuple[float, ...]
    noise: NoiseParams = PERFECT

    def __post_init__(self):
        if len(self.egrs) != len(self.fidelities):
            raise ValueError("egrs and fidelities must have equal length")
        if len(self.egrs) < 1:
            raise ValueError("chain must have at least one hop")
        for egr in self.egrs:
            if egr < 1:
                raise ValueError(f"hop egr must be >= 1, got {egr}")
        for f in self.fidelities:
            check_fidelity(f)

    @property
    def n_hops(self) -> int:
        return len(self.egrs)


def chain_from_path(net: Network, path) -> Chain:
    """The chain induced by walking ``path`` through ``net``."""
    channels = [net.channel(u, v) for u, v in zip(path, path[1:])]
    return Chain(
        egrs=tuple(ch.egr for ch in channels),
        fidelities=tuple(ch.raw_fidelity for ch in channels),
        noise=net.noise,
    )


@dataclass(frozen=True)
class PurificationPlan:
    """An ordered segmentation of a chain with one circuit width per segment."""

    segments: tuple[tuple[int, int], ...]  # (hop count, circuit k) per segment

    def __post_init__(self):
        if not self.segments:
            raise ValueError("plan must have at least one segment")
        for hops, k in self.segments:
            if not 1 <= hops <= MAX_SEGMENT_HOPS:
                raise ValueError(f"segment length must be 1..{MAX_SEGMENT_HOPS}, got {hops}")
            if not 1 <= k <= 8:
                raise ValueError(f"segment circuit width must be 1..8, got {k}")

    @property
    def n_hops(self) -> int:
        return sum(hops for hops, _ in self.segments)

    def summary(self) -> str:
        """Compact text form, e.g. ``3:8+2:1`` (hops:k per segment)."""
        return "+".join(f"{hops}:{k}" for hops, k in self.segments)


@dataclass(frozen=True)
class PlanEvaluation:
    final_fidelity: float
    rate: float
    d_total: float


def no_purification_plan(n_hops: int) -> PurificationPlan:
    """Plain swapping: single-hop segments, identity circuits."""
    return PurificationPlan(segments=tuple((1, 1) for _ in range(n_hops)))


@lru_cache(maxsize=None)
def enumerate_segmentations(n_hops: int) -> tuple[tuple[int, ...], ...]:
    """All ordered compositions of ``n_hops`` into parts of size 1..3.

    Counts follow the tribonacci recurrence T(n) = T(n-1) + T(n-2) + T(n-3).
    """
    if not 1 <= n_hops <= MAX_CHAIN_HOPS:
        raise ValueError(f"n_hops must be 1..{MAX_CHAIN_HOPS}, got {n_hops}")
    result = []

    def extend(prefix, remaining):
        if remaining == 0:
            result.append(tuple(prefix))
            return
        for part in range(1, min(MAX_SEGMENT_HOPS, remaining) + 1):
            prefix.append(part)
            extend(prefix, remaining - part)
            prefix.pop()

    extend([], n_hops)
    return tuple(result)


@lru_cache(maxsize=None)
def _segment_table(f_raw: float, min_egr: int, p2: float, eta: float,
                   max_k: int) -> tuple[tuple[float, float, float], ...]:
    """Per-k table for one segment: (output fidelity, its W value, rate)."""
    noise = NoiseParams(p2, eta)
    rows = []
    for k in range(1, max_k + 1):
        circuit = circuit_for(k)
        outcome = evaluate_circuit(circuit, f_raw, noise)
        rate = post_purification_rate(min_egr, circuit, outcome)
        rows.append((outcome.f_out, fidelity_to_w(outcome.f_out), rate))
    return tuple(rows)


@lru_cache(maxsize=None)
def _segment_fid_ceiling(f_raw: float, p2: float, eta: float, max_k: int) -> float:
    """Highest circuit output fidelity achievable on one segment."""
    noise = NoiseParams(p2, eta)
    return max(
        evaluate_circuit(circuit_for(k), f_raw, noise).f_out
        for k in range(1, max_k + 1)
    )


def evaluate_plan(chain: Chain, plan: PurificationPlan) -> PlanEvaluation:
    """Evaluate one plan on one chain.

    Per segment: the raw links are swapped into min-EGR longer pairs, the
    segment circuit purifies them; the segment outputs are then swapped
    together and the end-to-end rate is the minimum post-purification
    segment rate.
    """
    if plan.n_hops != chain.n_hops:
        raise ValueError(
            f"plan covers {plan.n_hops} hops but chain has {chain.n_hops}")
    noise = chain.noise
    seg_fids = []
    seg_rates = []
    start = 0
    for hops, k in plan.segments:
        f_raw = swap_fidelity(chain.fidelities[start:start + hops], noise)
        min_egr = min(chain.egrs[start:start + hops])
        circuit = circuit_for(k)
        outcome = evaluate_circuit(circuit, f_raw, noise)
        seg_fids.append(outcome.f_out)
        seg_rates.append(post_purification_rate(min_egr, circuit, outcome))
        start += hops
    final_fidelity = swap_fidelity(seg_fids, noise)
    rate = min(seg_rates)
    return PlanEvaluation(
        final_fidelity=final_fidelity,
        rate=rate,
        d_total=distillable(rate, final_fidelity),
    )


def optimize_chain(chain: Chain, max_k: int = 8) -> tuple[PurificationPlan, PlanEvaluation]:
    """Best purification plan for ``chain`` by distillable entanglement.

    For every segmentation, every segment starts at the most selective
    circuit (k = max_k). Each relaxation step finds the segments whose
    post-purification rate equals the current bottleneck and decrements
    their k by one (k = 1 means no purification; if every bottleneck
    segment has already reached k = 1 the lowest-rate segment still above
    k = 1 is relaxed instead), evaluating the plan after every step until
    all segments reach k = 1. The best (plan, evaluation) over all
    segmentations and relaxation states is returned; ties break toward
    higher fidelity, then fewer segments, then smaller k-vectors.
    """
    best = _optimize_floored(chain, max_k, None)
    assert best is not None
    return best


def _segmentation_ceiling(tables, cpow: float, n_segs: int) -> float:
    """Sound upper bound on d_total over every k-vector of one segmentation.

    For each segment, couples its own achievable (rate, fidelity) pairs with
    the other segments held at their fidelity ceilings; the true optimum
    cannot exceed the loosest segment's best coupling.
    """
    wmax = [max(row[1] for row in table) for table in tables]
    prefix = [1.0] * (n_segs + 1)
    for i in range(n_segs):
        prefix[i + 1] = prefix[i] * wmax[i]
    suffix = [1.0] * (n_segs + 1)
    for i in range(n_segs - 1, -1, -1):
        suffix[i] = suffix[i + 1] * wmax[i]
    bound = math.inf
    for i, table in enumerate(tables):
        others = prefix[i] * suffix[i + 1]
        seg_best = 0.0
        for f_out, w, rate in table:
            if rate <= seg_best:
                continue
            fid = f_out if n_segs == 1 else 0.25 + 0.75 * cpow * (w * others)
            seg_best = max(seg_best, rate * distillable_per_pair(fid))
        bound = min(bound, seg_best)
    return bound


def _optimize_floored(chain: Chain, max_k: int, floor_d: float | None,
                      ) -> tuple[PurificationPlan, PlanEvaluation] | None:
    """Relaxation search; segmentations provably unable to reach ``floor_d``
    are skipped, so passing the best-so-far of an outer search keeps the
    combined result exact. Returns None when everything was skipped."""
    if chain.n_hops > MAX_CHAIN_HOPS:
        raise ValueError(
            f"chain has {chain.n_hops} hops; optimizer handles at most {MAX_CHAIN_HOPS}")
    noise = chain.noise
    p2, eta = noise.p2, noise.eta

    # Raw swapped fidelity and pair budget per (start, hops) slice.
    seg_cache: dict[tuple[int, int], tuple[float, int]] = {}

    def seg_info(start, hops):
        try:
            return seg_cache[start, hops]
        except KeyError:
            info = (
                swap_fidelity(chain.fidelities[start:start + hops], noise),
                min(chain.egrs[start:start + hops]),
            )
            seg_cache[start, hops] = info
            return info

    prune = floor_d is not None and noise.swap_factor >= 0.0
    best_key = None
    best_d = -math.inf
    best = None
    for seg_lens in enumerate_segmentations(chain.n_hops):
        n_segs = len(seg_lens)
        tables = []
        start = 0
        for hops in seg_lens:
            f_raw, min_egr = seg_info(start, hops)
            tables.append(_segment_table(f_raw, min_egr, p2, eta, max_k))
            start += hops
        cpow = noise.swap_factor ** (n_segs - 1)
        if prune:
            ceiling = _segmentation_ceiling(tables, cpow, n_segs)
            if ceiling * (1.0 + 1e-9) + 1e-12 < floor_d:
                continue
        top = max_k - 1
        fids = [table[top][0] for table in tables]
        ws = [table[top][1] for table in tables]
        rates = [table[top][2] for table in tables]
        ks = [max_k] * n_segs
        while True:
            rate = min(rates)
            # d_total <= rate, so states below the incumbent are visited but
            # need no evaluation; equality is kept for tie-breaking.
            if rate >= best_d or best is None:
                if n_segs == 1:
                    fid = fids[0]
                else:
                    fid = 0.25 + 0.75 * cpow * math.prod(ws)
                d_total = distillable(rate, fid)
                key = (
                    d_total,
                    fid,
                    -n_segs,
                    tuple(-k for k in ks),
                    tuple(-length for length in seg_lens),
                )
                if best_key is None or key > best_key:
                    best_key = key
                    best_d = d_total
                    best = (
                        PurificationPlan(segments=tuple(zip(seg_lens, ks))),
                        PlanEvaluation(final_fidelity=fid, rate=rate, d_total=d_total),
                    )
            relax = [i for i, k in enumerate(ks)
                     if k > 1 and rates[i] == rate]
            if not relax:
                above = [i for i, k in enumerate(ks) if k > 1]
                if not above:
                    break
                lowest = min(rates[i] for i in above)
                relax = [i for i in above if rates[i] == lowest]
            for i in relax:
                k = ks[i] - 1
                ks[i] = k
                fids[i], ws[i], rates[i] = tables[i][k - 1]
    return best
