"""Benchmark the compiled kernels against the pure-Python fallback.

Each path runs in its own subprocess (the KERNELSCOPE_NUMBA flag is read at
import time).  The compiled path is timed after a warm-up scan so the numbers
exclude JIT compilation; the fallback runs the same source uncompiled.

    python3 benchmarks/bench_scan.py [--nx 80] [--repeats 3]
"""

import argparse
import json
import os
import subprocess
import sys
import time

_WORKER = """
import json
import time
import kernelscope as ks
from kernelscope._jit import NUMBA_ENABLED

nx = {nx}
budget = ks.OrbitBudget(max_iterations={max_iter})
configs = [
    ("exp_poly limit", "exp_poly", ks.INF, ks.GridSpec(complex(-1.2, -0.9), 1.8, 1.8, nx, nx)),
    ("exp_poly n=128", "exp_poly", 128, ks.GridSpec(complex(-1.2, -0.9), 1.8, 1.8, nx, nx)),
    ("cubic n=16", "cubic_example", 16, ks.GridSpec(complex(-0.9, -0.9), 1.8, 1.8, nx, nx)),
    ("cubic limit", "cubic_example", ks.INF, ks.GridSpec(complex(-0.9, -0.9), 1.8, 1.8, nx, nx)),
]
# warm-up: compile (or no-op on the pure path)
ks.scan("cubic_example", 4, ks.GridSpec(complex(-0.7, -0.7), 1.4, 1.4, 8, 8), budget)
results = {{}}
for name, family, n, grid in configs:
    best = float("inf")
    counts = None
    for _ in range({repeats}):
        t0 = time.perf_counter()
        r = ks.scan(family, n, grid, budget, workers=1)
        best = min(best, time.perf_counter() - t0)
        counts = r.counts()
    results[name] = {{"seconds": best, "counts": counts}}
print(json.dumps({{"numba": NUMBA_ENABLED, "results": results}}))
"""


def run_path(numba_flag, nx, max_iter, repeats):
    env = dict(os.environ, KERNELSCOPE_NUMBA=numba_flag)
    code = _WORKER.format(nx=nx, max_iter=max_iter, repeats=repeats)
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True)
    if out.returncode != 0:
        sys.stderr.write(out.stderr)
        raise SystemExit(1)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--nx", type=int, default=80,
                        help="grid side length (cells)")
    parser.add_argument("--max-iter", type=int, default=1000)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    print(f"scan benchmark: {args.nx}x{args.nx} cells, "
          f"max_iterations={args.max_iter}, best of {args.repeats}")
    t0 = time.time()
    compiled = run_path("1", args.nx, args.max_iter, args.repeats)
    pure = run_path("0", args.nx, args.max_iter, args.repeats)
    assert compiled["numba"] and not pure["numba"]

    width = max(len(k) for k in compiled["results"])
    print(f"\n{'config':<{width}}  {'numba':>9}  {'pure':>9}  {'speedup':>8}  match")
    for name, comp in compiled["results"].items():
        ref = pure["results"][name]
        speedup = ref["seconds"] / comp["seconds"]
        match = "yes" if ref["counts"] == comp["counts"] else "NO"
        print(f"{name:<{width}}  {comp['seconds']:>8.3f}s  {ref['seconds']:>8.3f}s"
              f"  {speedup:>7.1f}x  {match}")
    print(f"\ntotal wall time {time.time() - t0:.0f}s")


if __name__ == "__main__":
    main()
