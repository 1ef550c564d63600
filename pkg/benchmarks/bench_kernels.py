"""Compare the compiled and pure-Python integration kernels.

    python benchmarks/bench_kernels.py [--points N] [--repeat R]

Times basin classification of N random points and one backward separatrix
branch on each backend, and checks that both produce identical output.
"""
import argparse
import time

import numpy as np

from lvresilience import _kernels_py

try:
    from lvresilience import _kernels as compiled
except ImportError:
    compiled = None

CLASSIFY_ARGS = (2.0, 3.0, 0.5, 1e-9, 1e-11, 1e4, 1e-12, 1e-8)


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    pts = np.random.default_rng(0).random((args.points, 2))
    branch = (0.2 - 1e-7, 0.4 - 2e-7, 2.0, 3.0, 0.5, -1.0, 1e-11, 1e-16, 1e4, 1e-12, 1e-8,
              np.inf, np.inf, 5e-3, True)
    backends = [("python", _kernels_py)]
    if compiled is not None:
        backends.append(("cython", compiled))
    else:
        print("compiled extension not built; timing the Python kernel only")

    rows = {}
    for name, mod in backends:
        tc, labels = best_of(lambda: mod.classify_points(pts[:, 0], pts[:, 1], *CLASSIFY_ARGS),
                             args.repeat)
        tb, path = best_of(lambda: mod.integrate_path(*branch), args.repeat)
        rows[name] = (tc, tb, labels, path)
        print(f"{name:>7}: classify {args.points} points {tc * 1e3:9.1f} ms | "
              f"branch ({path[0].shape[0]} steps) {tb * 1e3:8.2f} ms")

    if "cython" in rows:
        py, cy = rows["python"], rows["cython"]
        same = np.array_equal(py[2], cy[2]) and np.array_equal(py[3][0], cy[3][0])
        print(f"speedup: classify x{py[0] / cy[0]:.1f}, branch x{py[1] / cy[1]:.1f}; "
              f"outputs identical: {same}")


if __name__ == "__main__":
    main()
