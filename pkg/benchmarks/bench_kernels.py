#!/usr/bin/env python3
"""Benchmark the numba kernels against their pure-numpy fallbacks.

Run with the package installed:  python benchmarks/bench_kernels.py
Sizes mirror the ER sweep workload (n = 10^4, ~1.5 * 10^5 parent edges).
"""

import time

import numpy as np

from graphalign import kernels as K
from graphalign.sampling import ModelSpec, build_parameter_matrix, tri_unrank
from graphalign.seeding import rng_from


def bench(fn, *args, repeat=5, warmup=True):
    if warmup:
        fn(*args)
    t0 = time.perf_counter()
    for _ in range(repeat):
        fn(*args)
    return (time.perf_counter() - t0) / repeat


def main():
    n = 10_000
    rng = rng_from(123)
    model = build_parameter_matrix(
        ModelSpec(n=n, kind="er", params={"p": 0.003}, s=0.8, m=2, seed=123))
    keys_a = model.sample_parent_keys(rng)
    keys_b = model.sample_parent_keys(rng)
    indptr, indices = K.csr_from_keys_np(n, keys_a)
    member = rng.random(n) < 0.05

    m = 8
    M = np.full((m, m, n), -1, dtype=np.int64)
    for i in range(m):
        for j in range(m):
            if i != j:
                perm = rng.permutation(n).astype(np.int64)
                mask = rng.random(n) < 0.9
                M[i, j, mask] = perm[mask]

    cases = [
        ("csr_from_keys", (n, keys_a), K.csr_from_keys_np, "csr_from_keys_nb"),
        ("intersect_keys", (keys_a, keys_b), K.intersect_keys_np, "intersect_keys_nb"),
        ("union_keys", (keys_a, keys_b), K.union_keys_np, "union_keys_nb"),
        ("core_peel_mask k=13", (n, indptr, indices, 13), K.core_peel_mask_np,
         "core_peel_mask_nb"),
        ("expand_mask", (n, indptr, indices, member), K.expand_mask_np,
         "expand_mask_nb"),
        ("closure m=8", (M,), K.closure_np, "closure_nb"),
    ]

    if not K.HAVE_NUMBA:
        print("numba unavailable; timing the numpy path only")
    print(f"{'kernel':<22} {'numpy':>10} {'numba':>10} {'speedup':>9}")
    for name, args, np_fn, nb_name in cases:
        t_np = bench(np_fn, *args, warmup=False)
        if K.HAVE_NUMBA:
            nb_fn = getattr(K, nb_name)
            t_nb = bench(nb_fn, *args)
            print(f"{name:<22} {t_np*1e3:9.2f}ms {t_nb*1e3:9.2f}ms {t_np/t_nb:8.1f}x")
        else:
            print(f"{name:<22} {t_np*1e3:9.2f}ms {'-':>10} {'-':>9}")


if __name__ == "__main__":
    main()
