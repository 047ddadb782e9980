#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-numpy fallback.

Times matrix exponentials, logarithms, and a full order-asymmetry scan on
the sizes the experiments actually use. The compiled path is whatever
``mycocat.kernels`` selected at import (numba when available and
MYCOCAT_DISABLE_NUMBA is unset); the numpy column always runs the plain
implementations.

Usage:
    python benchmarks/bench_kernels.py [--reps 300] [--sizes 8 24 48]
"""

import argparse
import time

import numpy as np

from mycocat import kernels
from mycocat.experiments import (
    ExposureExperiment,
    PulseTemplate,
    reference_species,
    run_order_asymmetry_scan,
)


def time_fn(fn, args_list, reps):
    fn(*args_list[0])  # warm-up / trigger compilation
    start = time.perf_counter()
    for i in range(reps):
        fn(*args_list[i % len(args_list)])
    return (time.perf_counter() - start) / reps


def bench_matrix_kernels(sizes, reps):
    rng = np.random.default_rng(0)
    print(f"{'kernel':<10} {'n':>4} {'active (us)':>12} {'numpy (us)':>12} {'speedup':>8}")
    for n in sizes:
        mats = [rng.normal(size=(n, n)) * 0.3 for _ in range(8)]
        exps = [kernels.expm_numpy(m) for m in mats]
        for name, active, plain, args in (
            ("expm", kernels.expm, kernels.expm_numpy, [(m,) for m in mats]),
            ("logm", kernels.logm, kernels.logm_numpy, [(e,) for e in exps]),
        ):
            t_active = time_fn(active, args, reps)
            t_plain = time_fn(plain, args, reps)
            speedup = t_plain / t_active if t_active > 0 else float("inf")
            print(
                f"{name:<10} {n:>4} {t_active * 1e6:>12.1f} "
                f"{t_plain * 1e6:>12.1f} {speedup:>7.2f}x"
            )


def bench_order_scan():
    exp = ExposureExperiment(
        species=reference_species(n_sites=8, channels=2, features=3),
        pulse_p=PulseTemplate(channel=0),
        pulse_q=PulseTemplate(channel=1),
    )
    run_order_asymmetry_scan(exp)  # warm-up
    start = time.perf_counter()
    run_order_asymmetry_scan(exp)
    elapsed = time.perf_counter() - start
    print(f"\norder-asymmetry scan (8 sites, 5 eps points): {elapsed * 1e3:.1f} ms")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--reps", type=int, default=300)
    parser.add_argument("--sizes", type=int, nargs="+", default=[8, 24, 48])
    args = parser.parse_args()

    mode = "numba" if kernels.NUMBA_ENABLED else "numpy (fallback)"
    print(f"active kernel path: {mode}")
    if not kernels.NUMBA_ENABLED:
        print("note: both columns run the same implementation; install numba")
        print("or unset MYCOCAT_DISABLE_NUMBA to compare compiled kernels.\n")
    bench_matrix_kernels(args.sizes, args.reps)
    bench_order_scan()


if __name__ == "__main__":
    main()
