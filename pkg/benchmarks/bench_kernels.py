#!/usr/bin/env python3
"""Benchmark the compiled eigensolver kernels against the pure NumPy twin.

The workloads mirror what the positivity probes actually do: large
batches of small Hermitian eigenproblems (eigenvalues only on the grid
pass, eigenvectors during descent), plus one end-to-end probe.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from isosweep import kernels, supermaps, zoo  # noqa: E402


def timed(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def batch(rng, m, n):
    g = rng.normal(size=(m, n, n)) + 1j * rng.normal(size=(m, n, n))
    return np.ascontiguousarray((g + np.conj(np.transpose(g, (0, 2, 1)))) / 2)


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    backends = kernels.available_backends()
    if "compiled" not in backends:
        print("compiled kernels not built (run `python setup.py build_ext "
              "--inplace`); benchmarking the pure backend only")

    rng = np.random.default_rng(0)
    workloads = [
        ("grid pass, 3x3 x 262144, values only", batch(rng, 262144, 3), False),
        ("descent pass, 3x3 x 20000, with vectors", batch(rng, 20000, 3), True),
        ("2-positivity grid, 6x6 x 59049, values only", batch(rng, 59049, 6), False),
        ("large instance, 81x81 x 10, with vectors", batch(rng, 10, 81), True),
    ]

    header = f"{'workload':<44} " + " ".join(f"{b:>10}" for b in backends)
    print(header)
    print("-" * len(header))
    for label, mats, vectors in workloads:
        times = {}
        values = {}
        for be in backends:
            times[be], (w, _) = timed(
                lambda be=be: kernels.jacobi_eigh_batch(
                    mats, compute_vectors=vectors, backend=be), args.repeat)
            values[be] = w
        row = f"{label:<44} " + " ".join(f"{times[b] * 1e3:>8.1f}ms" for b in backends)
        if len(backends) == 2:
            dev = np.abs(values["compiled"] - values["python"]).max()
            row += f"   x{times['python'] / times['compiled']:.1f}  (max dev {dev:.1e})"
        print(row)

    print()
    s = zoo.extremal_atomic_map()
    saved = kernels._impl
    try:
        for be in backends:
            kernels._impl = kernels.get_backend(be)
            t, verdict = timed(lambda: supermaps.positivity_probe(s, seed=1),
                               args.repeat)
            print(f"positivity probe, default budget, {be:>8}: "
                  f"{t * 1e3:7.1f}ms  (min found {verdict.min_value:+.2e})")
    finally:
        kernels._impl = saved
    return 0


if __name__ == "__main__":
    sys.exit(main())
