"""Time the numerical kernels and a full sweep with and without numba.

Each backend runs in its own interpreter because the JIT switch is read at
import time. Usage::

    python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
from thermoband import kernels
from thermoband._accel import backend_name
from thermoband.linalg import eigvals
from thermoband.material import FIG4_GROUPS, from_ratios
from thermoband.toolkit import sweep

repeat = int(sys.argv[1])
rng = np.random.default_rng(0)
n = 20000
lower = rng.uniform(0.1, 1.0, n)
upper = rng.uniform(0.1, 1.0, n)
diag = 4.0 + rng.uniform(0.0, 1.0, n)
rhs = rng.standard_normal(n)
mats = [rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)) for _ in range(2000)]
coeffs = rng.standard_normal(9) + 0j
roots = np.roots(coeffs[::-1]) * (1 + 1e-6)
cell = from_ratios(FIG4_GROUPS)

def timed(fn):
    fn()  # warm-up (includes compilation)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best

out = {"backend": backend_name()}
out["thomas_solve n=2e4"] = timed(lambda: kernels.thomas_solve(lower, diag, upper, rhs))
out["eigvals 2000 x (4x4)"] = timed(lambda: [eigvals(m) for m in mats])
out["power_traces 2000 x (4x4)"] = timed(lambda: [kernels.power_traces(m, 4) for m in mats])
out["newton_polish deg 8 x 2000"] = timed(
    lambda: [kernels.newton_polish(coeffs, roots, 8) for _ in range(2000)])
out["fb sweep coupled 200 pts"] = timed(
    lambda: sweep(cell, "fb", (0.01, 3.0), 200, "coupled", threads=1))
out["hom2 sweep coupled 200 pts"] = timed(
    lambda: sweep(cell, "hom2", (0.01, 3.0), 200, "coupled", threads=1))
print(json.dumps(out))
"""


def run_backend(disable_jit, repeat):
    env = dict(os.environ, THERMOBAND_DISABLE_JIT="1" if disable_jit else "0")
    proc = subprocess.run([sys.executable, "-c", WORKER, str(repeat)], env=env,
                          capture_output=True, text=True, check=True)
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    jit = run_backend(False, args.repeat)
    ref = run_backend(True, args.repeat)
    print(f"{'case':<30} {jit['backend']:>12} {ref['backend']:>12} {'speed-up':>9}")
    for key in jit:
        if key == "backend":
            continue
        a, b = jit[key], ref[key]
        print(f"{key:<30} {a * 1e3:>10.2f}ms {b * 1e3:>10.2f}ms {b / a:>8.1f}x")


if __name__ == "__main__":
    main()
