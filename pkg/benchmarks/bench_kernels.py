"""Compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat N] [--skip-solve]

The first table times each kernel on synthetic inputs shaped like a
simplex iteration on the toy (20000 columns, 8000 rows, 50 etas). The second solves one toy scenario end to end in a subprocess per
backend (the backend is fixed at import time).
"""
from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import timeit

import numpy as np

from multivec.kernels import available_backends, backend_module

SOLVE_SNIPPET = """
import json, time
from multivec import kernels, toy
from multivec import scenario as sc
spec = sc.ScenarioSpec(toy.data_path("toy"), toy.data_path("transport_toy"), h2_hdv="medium", rep_days={days})
t0 = time.perf_counter()
res = sc.run_scenario(spec)
print(json.dumps({{"backend": kernels.BACKEND, "seconds": time.perf_counter() - t0,
                  "status": res.status, "iterations": res.solution.iterations,
                  "objective": res.solution.objective}}))
"""


def _inputs(rng: np.random.Generator, n: int = 20000, m: int = 8000, etas: int = 50):
    # mid-solve state: m basic columns, the rest mostly at lower bound with a
    # few percent attractive reduced costs
    status = np.ones(n, dtype=np.int8)
    status[rng.permutation(n)[:m]] = 0
    status[(status == 1) & (rng.random(n) < 0.05)] = 2
    d = np.abs(rng.normal(size=n)) * np.where(status == 2, -1.0, 1.0)
    flip = rng.random(n) < 0.03
    d[flip] = -d[flip]
    d[status == 0] = 0.0
    weights = rng.uniform(1.0, 4.0, n)
    xb = rng.uniform(0, 10, m)
    lb = np.zeros(m)
    ub = np.where(rng.random(m) < 0.5, np.inf, 12.0)
    alpha = rng.normal(size=m)
    basis = rng.permutation(n)[:m].astype(np.int64)
    eta_pos = rng.integers(0, m, etas).astype(np.int64)
    eta_cols = rng.normal(size=(etas, m))
    eta_cols[np.arange(etas), eta_pos] += 5.0
    pts = rng.random((365, 48))
    D = ((pts[:, None, :] - pts[None, :, :]) ** 2).sum(-1)
    medoids = np.array([0, 50, 100, 200, 300, 360], dtype=np.int64)
    dm = D[:, medoids]
    order = np.argsort(dm, axis=1)
    nearest_pos = order[:, 0].astype(np.int64)
    nearest = dm[np.arange(365), order[:, 0]].copy()
    second = dm[np.arange(365), order[:, 1]].copy()
    return {
        "price": lambda k: k.price(d, weights, status, 1e-9, False),
        "ratio_test": lambda k: k.ratio_test(xb, lb, ub, alpha, 1.0, 1e-9, 1e-7, False, basis),
        "ftran_etas": lambda k: k.ftran_etas(eta_pos, eta_cols, etas, rng.normal(size=m)),
        "btran_etas": lambda k: k.btran_etas(eta_pos, eta_cols, etas, rng.normal(size=m)),
        "pam_swap": lambda k: k.pam_swap(D, medoids, nearest_pos, nearest, second),
    }


def bench_kernels(repeat: int) -> None:
    backends = available_backends()
    cases = _inputs(np.random.default_rng(0))
    print(f"{'kernel':<12}" + "".join(f"{b + ' (ms)':>16}" for b in backends) + f"{'speedup':>10}")
    for name, call in cases.items():
        times = []
        for b in backends:
            mod = backend_module(b)
            t = min(timeit.repeat(lambda: call(mod), number=5, repeat=repeat)) / 5
            times.append(t * 1e3)
        speed = f"{times[0] / times[-1]:.1f}x" if len(times) > 1 else "-"
        print(f"{name:<12}" + "".join(f"{t:>16.3f}" for t in times) + f"{speed:>10}")


def bench_solve(days: int) -> None:
    print(f"\ntoy scenario, h2_hdv=medium, {days} representative days")
    for b in available_backends():
        env = dict(os.environ)
        env.pop("MULTIVEC_PURE_PYTHON", None)
        if b == "python":
            env["MULTIVEC_PURE_PYTHON"] = "1"
        out = subprocess.run([sys.executable, "-c", SOLVE_SNIPPET.format(days=days)],
                             env=env, capture_output=True, text=True, check=True)
        r = json.loads(out.stdout.strip().splitlines()[-1])
        print(f"  {r['backend']:<7} {r['seconds']:8.2f} s  {r['iterations']:6d} iterations  "
              f"objective {r['objective']:.10g} ({r['status']})")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--rep-days", type=int, default=3)
    ap.add_argument("--skip-solve", action="store_true")
    args = ap.parse_args()
    bench_kernels(args.repeat)
    if not args.skip_solve:
        bench_solve(args.rep_days)


if __name__ == "__main__":
    main()
