"""Time the full-subcomplex Betti sweep and GF(p) elimination on both backends.

    python3 benchmarks/bench_kernels.py [--m 14] [--repeat 3]
"""

import argparse
import time

import numpy as np

from momentangle import _kernels
from momentangle.complex_core import ordered_subsets
from momentangle.generators import random_manifold


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def bench_sweep(m, repeat, seed):
    K = random_manifold(m, seed=seed)
    table = K.face_table
    subsets = ordered_subsets(m)
    args = (table.masks, table.dim_start, table.bnd, subsets, 2)
    # warm the jit cache outside the timing
    _kernels.subset_betti(*args[:3], subsets[:4], 2, impl=_kernels._subset_betti_loop)
    t_loop, a = best_of(lambda: _kernels.subset_betti(*args, impl=_kernels._subset_betti_loop), repeat)
    t_np, b = best_of(lambda: _kernels.subset_betti(*args, impl=_kernels._subset_betti_np), repeat)
    assert np.array_equal(a, b), "backends disagree"
    return t_loop, t_np


def bench_rref(n, p, repeat, seed):
    rng = np.random.default_rng(seed)
    M = rng.integers(0, p, size=(n, n))
    _kernels._gfp_rref_loop(M[:2, :2].copy(), p)
    t_loop, a = best_of(lambda: _kernels._gfp_rref_loop(M.copy(), p), repeat)
    t_np, b = best_of(lambda: _kernels._gfp_rref_np(M.copy(), p), repeat)
    assert a[0] == b[0], "rank differs"
    return t_loop, t_np


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--m", type=int, default=14)
    ap.add_argument("--n", type=int, default=200)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    backend = "numba" if _kernels.HAVE_NUMBA else "python loops (numba missing)"
    print(f"loop backend: {backend}")
    t_loop, t_np = bench_sweep(args.m, args.repeat, args.seed)
    print(f"betti sweep m={args.m} ({1 << args.m} subsets): loop {t_loop:.3f}s  numpy {t_np:.3f}s  "
          f"ratio {t_np / t_loop:.1f}x")
    for p in (2, 3):
        t_loop, t_np = bench_rref(args.n, p, args.repeat, args.seed)
        print(f"rref {args.n}x{args.n} GF({p}): loop {t_loop:.4f}s  numpy {t_np:.4f}s  ratio {t_np / t_loop:.1f}x")


if __name__ == "__main__":
    main()
