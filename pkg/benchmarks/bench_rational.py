#!/usr/bin/env python3
"""Compare the exact-arithmetic backends on representative workloads.

The backend is picked when cachekit.core imports, so every measurement
runs in a fresh subprocess with CACHEKIT_RATIONAL pinned. Reports the
best wall time per workload and the gmpy2 speedup over fractions:

    python3 benchmarks/bench_rational.py [--repeat 3]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time


def run_workloads() -> dict:
    from cachekit.caching import CachingInstance, man_placement
    from cachekit.converse import general_lp_bound, load_lower_bound, symmetric_instance
    from cachekit.core import rat
    from cachekit.icmap import caching_to_ic
    from cachekit.icschemes import composite_symmetric_rate

    timings = {}

    start = time.perf_counter()
    p = man_placement(CachingInstance(N=3, K=3, B=3, t=1))
    ic = caching_to_ic(p, (1, 2, 3))
    value, _ = composite_symmetric_rate(ic)
    assert value == rat(1, 3)
    timings["composite_reduction"] = time.perf_counter() - start

    start = time.perf_counter()
    g = symmetric_instance(3, 3, rat(1, 2), "average")
    assert general_lp_bound(g) > 0
    timings["average_demand_lp"] = time.perf_counter() - start

    start = time.perf_counter()
    total = rat(0)
    for i in range(1200):
        total += load_lower_bound(10, 12, rat(i, 120))
    assert total > 0
    timings["bound_evaluations"] = time.perf_counter() - start

    return timings


def measure(backend: str, repeat: int) -> dict:
    best: dict = {}
    env = dict(os.environ, CACHEKIT_RATIONAL=backend)
    for _ in range(repeat):
        out = subprocess.run(
            [sys.executable, os.path.abspath(__file__), "--worker"],
            env=env,
            capture_output=True,
            text=True,
            check=True,
        )
        run = json.loads(out.stdout)
        for name, seconds in run.items():
            best[name] = min(best.get(name, seconds), seconds)
    return best


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()

    if args.worker:
        print(json.dumps(run_workloads()))
        return 0

    results = {}
    for backend in ("gmpy2", "fractions"):
        try:
            results[backend] = measure(backend, args.repeat)
        except subprocess.CalledProcessError as exc:
            print(f"{backend}: unavailable ({exc.stderr.strip().splitlines()[-1]})")
    if "fractions" not in results:
        return 1

    width = max(len(name) for name in results["fractions"])
    header = f"{'workload'.ljust(width)}  fractions   gmpy2    speedup"
    print(header)
    print("-" * len(header))
    for name, frac_s in results["fractions"].items():
        if "gmpy2" in results:
            gmp_s = results["gmpy2"][name]
            print(
                f"{name.ljust(width)}  {frac_s:8.3f}s  {gmp_s:6.3f}s  {frac_s / gmp_s:6.1f}x"
            )
        else:
            print(f"{name.ljust(width)}  {frac_s:8.3f}s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
