"""Deterministic verification checks behind the ``oracle-suite`` command.

Each check pits a production routine against an independent reference:
exhaustive enumeration, exact rational laws, or Monte Carlo frequencies
with 3-standard-error tolerances.  All randomness is fixed-seed, so the
suite is reproducible.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass

import numpy as np

from .graphs import Graph, Permutation, intersect, relabel
from .kcore import core_peel, low_degree_set, luczak_expand
from .oracle import (SecondMomentInputs, chernoff_upper, cut_prob,
                     cut_prob_enumerated, dominance_check, empirical_dominance,
                     kcore_estimator_bruteforce, mgf_triple, mle_bruteforce,
                     poissonized_lower_tail, second_moment_bound)
from .sampling import ModelSpec, bernoulli_indices, sample_family, tri_unrank
from .seeding import rng_from


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str
    seconds: float


def _random_graph(rng, n, p) -> Graph:
    t = bernoulli_indices(rng, n * (n - 1) // 2, p)
    i, j = tri_unrank(t, n)
    return Graph(n, i * n + j, validate=False)


def _core_subset_oracle(g: Graph, k: int) -> np.ndarray:
    """Largest min-degree->=k subset by scanning all 2^n subsets."""
    n = g.n
    rows = [0] * n
    for a, b in g.edges():
        rows[a] |= 1 << b
        rows[b] |= 1 << a
    best = 0
    best_size = 0
    for mask in range(1 << n):
        ok = True
        mm = mask
        while mm:
            v = (mm & -mm).bit_length() - 1
            mm &= mm - 1
            if (rows[v] & mask).bit_count() < k:
                ok = False
                break
        if ok and mask.bit_count() > best_size:
            best = mask
            best_size = mask.bit_count()
    out = []
    while best:
        v = (best & -best).bit_length() - 1
        best &= best - 1
        out.append(v)
    return np.array(out, dtype=np.int64)


# ---------------------------------------------------------------------------
# individual checks


def check_core_peel_oracle(graphs: int = 200, seed: int = 2024) -> CheckResult:
    t0 = time.perf_counter()
    rng = rng_from(seed, 11)
    bad = 0
    for _ in range(graphs):
        n = int(rng.integers(2, 9))
        p = float(rng.uniform(0.1, 0.9))
        k = int(rng.integers(0, 5))
        g = _random_graph(rng, n, p)
        got = core_peel(g, k).members
        want = _core_subset_oracle(g, k)
        if not np.array_equal(got, want):
            bad += 1
    return CheckResult("core-peel-vs-subset-enumeration", bad == 0,
                       f"{graphs} graphs, {bad} mismatches",
                       time.perf_counter() - t0)


def check_luczak_containment(graphs: int = 1000, seed: int = 2025) -> CheckResult:
    t0 = time.perf_counter()
    rng = rng_from(seed, 13)
    k = 3
    bad = 0
    for _ in range(graphs):
        g = _random_graph(rng, 60, 0.1)
        u0 = low_degree_set(g, k + 1)
        uf = luczak_expand(g, u0)
        outside = np.setdiff1d(np.arange(g.n), uf, assume_unique=True)
        core = core_peel(g, k).members
        if np.setdiff1d(outside, core).size:
            bad += 1
    return CheckResult("luczak-complement-in-core", bad == 0,
                       f"{graphs} graphs (n=60, p=0.1, k=3), {bad} violations",
                       time.perf_counter() - t0)


def check_cut_prob_exact(max_m: int = 12) -> CheckResult:
    t0 = time.perf_counter()
    mismatches = 0
    non_monotone = 0
    for m in range(2, max_m + 1):
        t_max = (m // 2) * ((m + 1) // 2)
        for b in range(0, m + 1):
            for l in range(1, m // 2 + 1):
                for t in range(-1, t_max + 1):
                    if cut_prob(m, l, b, t) != cut_prob_enumerated(m, l, b, t):
                        mismatches += 1
            if not dominance_check(m, b):
                non_monotone += 1
    ok = mismatches == 0 and non_monotone == 0
    return CheckResult("cut-prob-exact-and-monotone", ok,
                       f"m<=:{max_m}, {mismatches} enum mismatches, "
                       f"{non_monotone} monotonicity violations",
                       time.perf_counter() - t0)


def check_mle_duality(instances: int = 50, seed: int = 2026) -> CheckResult:
    t0 = time.perf_counter()
    rng = rng_from(seed, 17)
    bad = 0
    for idx in range(instances):
        n = int(rng.integers(3, 7))
        spec = ModelSpec(n=n, kind="er",
                         params={"p": float(rng.uniform(0.2, 0.8))},
                         s=float(rng.uniform(0.4, 1.0)), m=2,
                         seed=int(rng.integers(0, 2**63 - 1)))
        fam = sample_family(spec)
        g1, g2 = fam.observed
        _, profiles = mle_bruteforce([g1, g2])
        minimizers = {tuple(p[0].mapping.tolist()) for p in profiles}
        # independent dual enumeration: maximize intersection edges
        best = -1
        maximizers = set()
        for perm in itertools.permutations(range(n)):
            pi = Permutation(np.array(perm, dtype=np.int64), validate=False)
            count = intersect(g1, relabel(g2, pi)).edge_count
            if count > best:
                best = count
                maximizers = {perm}
            elif count == best:
                maximizers.add(perm)
        if minimizers != maximizers:
            bad += 1
    return CheckResult("mle-union-min-equals-intersection-max", bad == 0,
                       f"{instances} instances (m=2, n<=6), {bad} mismatches",
                       time.perf_counter() - t0)


def check_mgf_ordering() -> CheckResult:
    t0 = time.perf_counter()
    bad = 0
    for p in np.arange(0.01, 1.0, 0.01):
        for t in np.arange(-3.0, 3.0 + 1e-9, 0.1):
            mx, my, mz = mgf_triple(float(p), float(t))
            if not (mx <= my <= mz):
                bad += 1
    return CheckResult("mgf-triple-ordering", bad == 0,
                       f"99 x 61 grid, {bad} violations", time.perf_counter() - t0)


def check_chernoff_mc(draws: int = 100_000, seed: int = 2027) -> CheckResult:
    t0 = time.perf_counter()
    rng = rng_from(seed, 19)
    grid = [(100, 0.1), (200, 0.05), (500, 0.02)]
    deltas_upper = (0.3, 0.5)
    deltas_lower = (0.3, 0.5)
    bad = []
    for n, p in grid:
        x = rng.binomial(n, p, size=draws)
        np_ = n * p
        for d in deltas_upper:
            freq = float((x >= (1 + d) * np_).mean())
            bound = chernoff_upper(np_, d, "upper")
            se = math.sqrt(freq * (1 - freq) / draws)
            if freq > bound + 3 * se:
                bad.append(("upper", n, p, d))
        for d in deltas_lower:
            freq = float((x <= (1 - d) * np_).mean())
            bound = chernoff_upper(np_, d, "lower")
            se = math.sqrt(freq * (1 - freq) / draws)
            if freq > bound + 3 * se:
                bad.append(("lower", n, p, d))
    return CheckResult("chernoff-bounds-vs-monte-carlo", not bad,
                       f"12-point grid, {draws} draws, violations: {bad}",
                       time.perf_counter() - t0)


def check_poissonized_mc(draws: int = 100_000, seed: int = 2028) -> CheckResult:
    t0 = time.perf_counter()
    rng = rng_from(seed, 23)
    bad = []
    for n, p, t in [(100, 0.2, 8), (200, 0.1, 10), (400, 0.05, 0)]:
        x = rng.binomial(n, p, size=draws)
        ex = n * p
        freq = float((x <= t).mean())
        bound = poissonized_lower_tail(ex, t)
        se = math.sqrt(freq * (1 - freq) / draws)
        if freq > bound + 3 * se:
            bad.append((n, p, t))
    return CheckResult("poissonized-lower-tail-vs-monte-carlo", not bad,
                       f"3 points, {draws} draws, violations: {bad}",
                       time.perf_counter() - t0)


def check_second_moment_mc(settings=(0.5, 1.0, 2.0, 3.0, 4.0),
                           samples: int = 2000, seed: int = 2029) -> CheckResult:
    t0 = time.perf_counter()
    rng = rng_from(seed, 29)
    n = 300
    bad = []
    for mu in settings:
        d = math.log(n / mu)
        p = d / (n - 1)
        hits = 0
        for _ in range(samples):
            t = bernoulli_indices(rng, n * (n - 1) // 2, p)
            i, j = tri_unrank(t, n)
            touched = np.unique(np.concatenate([i, j])).size
            if n - touched >= 2:
                hits += 1
        freq = hits / samples
        bound = second_moment_bound(SecondMomentInputs(
            n=n, degrees=np.full(n, d), p_max=p)).primary
        se = math.sqrt(freq * (1 - freq) / samples)
        if freq < bound - 3 * se:
            bad.append(mu)
    return CheckResult("second-moment-bound-vs-monte-carlo", not bad,
                       f"mu in {list(settings)}, n=300, {samples} samples, "
                       f"violations: {bad}", time.perf_counter() - t0)


def check_empirical_dominance(samples: int = 5000, seed: int = 2030) -> CheckResult:
    t0 = time.perf_counter()
    spec = ModelSpec(n=500, kind="er", params={"p": 0.02}, s=0.5, m=6, seed=99123)
    fam = sample_family(spec)
    v = int(np.argmax(fam.parent.degrees()))
    rep = empirical_dominance(fam, v, 1, 3, samples, seed=seed, k=4, alpha=1.0)
    return CheckResult("cut-cost-empirical-dominance", rep.ok,
                       f"ER(500, 0.02), s=0.5, m=6, node degree {rep.parent_degree}, "
                       f"max violation {rep.max_violation:.4f}",
                       time.perf_counter() - t0)


def check_kcore_estimator_truth_bound(instances: int = 20, seed: int = 2031) -> CheckResult:
    t0 = time.perf_counter()
    rng = rng_from(seed, 31)
    bad = 0
    for _ in range(instances):
        n = int(rng.integers(4, 7))
        spec = ModelSpec(n=n, kind="er", params={"p": float(rng.uniform(0.3, 0.8))},
                         s=0.8, m=2, seed=int(rng.integers(0, 2**63 - 1)))
        fam = sample_family(spec)
        k = int(rng.integers(1, 3))
        truth_core = core_peel(intersect(*fam.children_aligned), k).size
        best, _ = kcore_estimator_bruteforce(fam.observed[0], fam.observed[1], k)
        if best < truth_core:
            bad += 1
    return CheckResult("kcore-estimator-beats-truth-alignment", bad == 0,
                       f"{instances} instances, {bad} violations",
                       time.perf_counter() - t0)


def run_suite(quick: bool = False) -> list[CheckResult]:
    if quick:
        return [
            check_core_peel_oracle(graphs=50),
            check_luczak_containment(graphs=150),
            check_cut_prob_exact(max_m=9),
            check_mle_duality(instances=10),
            check_mgf_ordering(),
            check_chernoff_mc(draws=20_000),
            check_poissonized_mc(draws=20_000),
            check_second_moment_mc(settings=(1.0, 2.0), samples=400),
            check_empirical_dominance(samples=1500),
            check_kcore_estimator_truth_bound(instances=6),
        ]
    return [
        check_core_peel_oracle(),
        check_luczak_containment(),
        check_cut_prob_exact(),
        check_mle_duality(),
        check_mgf_ordering(),
        check_chernoff_mc(),
        check_poissonized_mc(),
        check_second_moment_mc(),
        check_empirical_dominance(),
        check_kcore_estimator_truth_bound(),
    ]
