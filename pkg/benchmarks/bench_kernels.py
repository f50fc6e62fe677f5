"""Benchmark the hot kernels under the numba backend and the pure-Python
fallback (SNBIF_NO_NUMBA=1).

Run:  python3 benchmarks/bench_kernels.py [--fallback-reps N]

The script times a representative workload in-process, then re-executes
itself in a subprocess with the fallback forced and prints the comparison.
The fallback runs far fewer repetitions; timings are normalized per solve.
"""

import argparse
import json
import math
import os
import subprocess
import sys
import time

import numpy as np


def workload(reps):
    from snbif import kernels

    kernels.warmup()
    means = np.array([0.0, 0.0, 0.0, -1.0])
    amps = np.array([0.3])
    angs = np.array([2.0 * math.pi * 0.6180339887498949])
    phs = np.array([0.1])
    off = np.array([0, 0, 0, 1, 1], dtype=np.int64)

    t0 = time.perf_counter()
    acc = 0.0
    steps = 0
    for k in range(reps):
        status, _, x, n = kernels.rk45_x(
            means, amps, angs, phs, off, kernels.CUBIC, kernels.ADDITIVE,
            0.3, 0.0, 50.0, 0.1 + 0.01 * k, 1e-9, 1e-12, 1e6, math.inf)
        acc += x
        steps += n
    dt_x = time.perf_counter() - t0

    y0 = np.array([0.5, 0.0, 1.0, 0.0, 0.0])
    t0 = time.perf_counter()
    for _ in range(max(1, reps // 4)):
        kernels.rk45_orbit(means, amps, angs, phs, off, kernels.CUBIC,
                           kernels.ADDITIVE, 0.0, 0.0, 50.0, y0, 2,
                           1e-9, 1e-12, 1e6, math.inf)
    dt_var = time.perf_counter() - t0

    t0 = time.perf_counter()
    kernels.measure_positive_fraction(
        means[:1] + 0.25, amps[:1] * 0 - 0.25, angs[:1] / 0.6180339887498949,
        phs[:1] * 0, np.array([0, 1], dtype=np.int64), kernels.DEADZONE,
        -1.0, 1.0, np.array([0.25]), 200.0, 0.02, 1e-12)
    dt_meas = time.perf_counter() - t0

    return {"backend": "numba" if kernels.USING_NUMBA else "python",
            "reps": reps, "solve_s": dt_x / reps, "steps": steps,
            "variational_s": dt_var / max(1, reps // 4), "measure_s": dt_meas,
            "checksum": acc}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--reps", type=int, default=200)
    ap.add_argument("--fallback-reps", type=int, default=5)
    ap.add_argument("--emit-json", action="store_true",
                    help="print a single JSON record (used by the subprocess)")
    args = ap.parse_args()

    if args.emit_json:
        print(json.dumps(workload(args.reps)))
        return

    fast = workload(args.reps)
    env = dict(os.environ, SNBIF_NO_NUMBA="1")
    out = subprocess.run(
        [sys.executable, os.path.abspath(__file__), "--emit-json",
         "--reps", str(args.fallback_reps)],
        env=env, capture_output=True, text=True, check=True)
    slow = json.loads(out.stdout.strip().splitlines()[-1])

    print(f"{'':24s}{fast['backend']:>14s}{slow['backend']:>14s}{'speedup':>10s}")
    for key, label in (("solve_s", "scalar solve (T=50)"),
                       ("variational_s", "variational solve"),
                       ("measure_s", "measure sampler")):
        ratio = slow[key] / fast[key]
        print(f"{label:24s}{fast[key]*1e3:11.3f} ms{slow[key]*1e3:11.3f} ms{ratio:9.1f}x")
    rel = abs(fast["checksum"] / fast["reps"] - slow["checksum"] / slow["reps"])
    print(f"\nper-solve checksum agreement: {rel:.3e}")


if __name__ == "__main__":
    main()
