"""Benchmark the compiled Numerov kernels against the pure-Python fallback.

Micro-benchmarks call both backend modules directly on identical inputs;
--full also times one complete mean-field solve per backend in a
subprocess (backend selection happens at import, so a fresh interpreter
is needed for the end-to-end number).

Run:  python3 benchmarks/bench_kernels.py [--full]
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from ionlab import _kernels_py
from ionlab.radial import RadialGrid

try:
    from ionlab import _kernels

    BACKENDS = [("cython", _kernels), ("python", _kernels_py)]
except ImportError:
    BACKENDS = [("python", _kernels_py)]


def _timeit(fn, repeats):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def micro():
    grid = RadialGrid.log(4000, r_max=60.0)
    r, h = grid.r, grid.h
    V = -1.0 / r
    g = 0.25 + r * r * (V + 0.1)
    rows = []
    for name, mod in BACKENDS:
        reps = 50 if name == "cython" else 3
        t_nodes = _timeit(lambda m=mod: m.numerov_count_nodes(g, h), reps)
        t_out = _timeit(lambda m=mod: m.numerov_outward(g, h, g.size - 1), reps)
        t_in = _timeit(lambda m=mod: m.numerov_inward(g, h, 10), reps)
        rows.append((name, t_nodes, t_out, t_in))
    print(f"{'backend':<8} {'count_nodes':>12} {'outward':>12} {'inward':>12}")
    for name, a, b, c in rows:
        print(f"{name:<8} {a * 1e3:>10.3f}ms {b * 1e3:>10.3f}ms {c * 1e3:>10.3f}ms")
    if len(rows) == 2:
        base = rows[1]
        fast = rows[0]
        print("speedup  " + "  ".join(f"{base[i] / fast[i]:>10.1f}x" for i in (1, 2, 3)))
    # agreement between backends on the same trajectory
    if len(BACKENDS) == 2:
        va = BACKENDS[0][1].numerov_outward(g, h, g.size - 1)
        vb = BACKENDS[1][1].numerov_outward(g, h, g.size - 1)
        print(f"max relative backend difference: {np.max(np.abs(va - vb) / np.max(np.abs(va))):.2e}")


def full_solve():
    code = (
        "import time; t0=time.time(); from ionlab import hartree, kernels; "
        "s=hartree.solve(1.0, 1.0); "
        "print(f'{kernels.BACKEND}: solve(1,1) in {time.time()-t0:.2f}s, mu={s.mu:.8f}')"
    )
    for env_val in ("0", "1"):
        env = dict(os.environ, IONLAB_PURE_PYTHON=env_val)
        subprocess.run([sys.executable, "-c", code], env=env, check=True)


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--full", action="store_true", help="also time a full solve per backend")
    args = ap.parse_args()
    micro()
    if args.full:
        full_solve()
