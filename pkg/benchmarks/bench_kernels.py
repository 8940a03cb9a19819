"""Time the hot kernels with numba and with the plain-Python fallback.

Each backend runs in its own interpreter because the backend is fixed at
import time by BFCS_DISABLE_NUMBA. Usage:

    python benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
from bfcs import _accel
from bfcs.projections import project_tv_ball, tv, tv_prox
from bfcs.sensing import SignalSpec, gaussian_matrix, generate_signal, measure
from bfcs.solvers import SolverConfig, recover

repeat = int(sys.argv[1])
rng = np.random.default_rng(0)
v = rng.standard_normal(2000)
spec = SignalSpec()
A = gaussian_matrix(1000, 2000, 1)
x, scale = generate_signal(spec, 1, return_norm=True)
y = measure(A, x * scale, 1.0, 1)
cfg = SolverConfig("BFCS", "l1", tau=1e-3, K=100, epsilon=tv(x), max_iter=50)

cases = {
    "tv_prox n=2000": lambda: tv_prox(v, 0.5),
    "project_tv_ball n=2000": lambda: project_tv_ball(v, 0.1 * tv(v)),
    "recover BFCS 50 iters": lambda: recover(A, y, cfg),
}
out = {"backend": _accel.backend()}
for name, fn in cases.items():
    t0 = time.perf_counter()
    fn()  # warm-up, includes compilation
    first = time.perf_counter() - t0
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    out[name] = {"first": first, "best": best}
print(json.dumps(out))
"""


def run(disable, repeat):
    env = dict(os.environ)
    env.pop("BFCS_DISABLE_NUMBA", None)
    if disable:
        env["BFCS_DISABLE_NUMBA"] = "1"
    proc = subprocess.run([sys.executable, "-c", WORKER, str(repeat)], env=env,
                          capture_output=True, text=True, check=True)
    return json.loads(proc.stdout)


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5, help="timed repetitions per kernel (best is reported)")
    args = p.parse_args()
    fast = run(False, args.repeat)
    slow = run(True, args.repeat)
    print(f"{'kernel':<26}{fast['backend'] + ' (s)':>14}{slow['backend'] + ' (s)':>14}{'speedup':>10}")
    for name in fast:
        if name == "backend":
            continue
        a, b = fast[name]["best"], slow[name]["best"]
        print(f"{name:<26}{a:>14.5f}{b:>14.5f}{b / a:>9.1f}x")


if __name__ == "__main__":
    main()
