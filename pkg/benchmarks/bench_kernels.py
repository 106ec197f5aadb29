"""Compiled vs NumPy kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Prints the best wall time of each backend per workload and the speedup.
Both backends must agree to 1e-12 relative to the largest entry; the
script exits 1 otherwise.
"""
import argparse
import sys
import timeit

import numpy as np

from minrep import _kernels
from minrep._kernels import _pykernels as py

try:
    from minrep._kernels import _ckernels as cy
except ImportError:  # pragma: no cover
    cy = None


def workloads():
    rng = np.random.default_rng(0)
    u_small = np.sort(rng.uniform(0, 50, 200))
    u_large = np.sort(rng.uniform(0, 400, 2000))
    q_small = rng.uniform(-30, 30, 400)
    q_large = rng.uniform(-300, 300, 20000)
    return [
        ("laguerre table 60 x 200", "laguerre_function_table", (60, 0.5, u_small, 0.0)),
        ("laguerre table 200 x 2000", "laguerre_function_table", (200, 1.5, u_large, 0.0)),
        ("tilde series 400 points", "tilde_series", (0.5, q_small, 1.0, 0, 1e-17, 400)),
        ("tilde series 20000 points", "tilde_series", (1.5, q_large, 1.0, 0, 1e-17, 1000)),
    ]


def best(fn, args, repeat):
    return min(timeit.repeat(lambda: fn(*args), number=3, repeat=repeat)) / 3


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    opts = ap.parse_args(argv)
    if cy is None:
        print("compiled extension not built; only the NumPy fallback is available")
        return 0
    print(f"active backend: {_kernels.BACKEND}")
    print(f"{'workload':30s} {'cython [ms]':>12s} {'numpy [ms]':>12s} {'speedup':>8s}")
    ok = True
    for name, fn, args in workloads():
        a, b = getattr(cy, fn)(*args), getattr(py, fn)(*args)
        err = float(np.max(np.abs(a - b)) / np.max(np.abs(b)))
        if err > 1e-12:
            print(f"  mismatch in {name}: {err:.2e}")
            ok = False
        tc, tp = best(getattr(cy, fn), args, opts.repeat), best(getattr(py, fn), args, opts.repeat)
        print(f"{name:30s} {1e3 * tc:12.3f} {1e3 * tp:12.3f} {tp / tc:8.1f}x")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
