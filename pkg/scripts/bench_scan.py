#!/usr/bin/env python3
"""Benchmark the key-lemma scan kernels: numba @njit vs pure-numpy fallback.

The same exhaustive grid is walked with each backend (results must match
exactly; both are exact int64 arithmetic).  The numba timing excludes the
one-off JIT compilation by warming the kernel first.

Usage:
    python3 scripts/bench_scan.py [--n-max 4] [--kappa 3] [--band 2] [--python]
"""

import argparse
import time

from slopecert import kernels
from slopecert.scan import run_scan


def time_backend(backend: str, n_max: int, kappa: int, band: int):
    # warm: JIT compile (numba) / table caches (all backends)
    run_scan(n_max=2, kappa_min=-1, kappa_max=1, ef_values=((1, 1),),
             band_scale=band, backend=backend)
    started = time.perf_counter()
    report = run_scan(n_max=n_max, kappa_min=-kappa, kappa_max=kappa,
                      band_scale=band, backend=backend)
    elapsed = time.perf_counter() - started
    return elapsed, report


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-max", type=int, default=4)
    parser.add_argument("--kappa", type=int, default=3)
    parser.add_argument("--band", type=int, default=2, help="band scale (2 exercises the candidate search hardest)")
    parser.add_argument("--python", action="store_true", help="also time the pure-python reference")
    args = parser.parse_args()

    backends = ["numpy"]
    if "numba" in kernels._BACKENDS:
        backends.insert(0, "numba")
    if args.python:
        backends.append("python")

    results = {}
    for backend in backends:
        elapsed, report = time_backend(backend, args.n_max, args.kappa, args.band)
        results[backend] = (elapsed, report)
        print(
            f"{backend:>6}: {elapsed:8.3f}s   "
            f"({report.data_checked} data, {report.misaligned} misaligned)"
        )

    summaries = {b: r.summary() for b, (_, r) in results.items()}
    baseline = next(iter(summaries.values()))
    if any(s != baseline for s in summaries.values()):
        raise SystemExit("BACKEND MISMATCH: results differ between kernels")
    print("all backends agree exactly")
    if "numba" in results and "numpy" in results:
        speedup = results["numpy"][0] / results["numba"][0]
        print(f"numba speedup over numpy: {speedup:.1f}x")


if __name__ == "__main__":
    main()
