"""Timing comparison of the radius-iteration backends.

Runs the interior-radius solve on a family of triangulated-disk layout
problems with both the compiled kernel (when available) and the pure NumPy
fallback, printing per-instance timings and the speedup.

    python benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import time

import numpy as np

from packrigid._kernels import pure
from packrigid.layout import _interior_csr, random_layout_problem

try:
    from packrigid._kernels import _angles_cy as compiled
except ImportError:
    compiled = None


def build_suite():
    rng = np.random.default_rng(7)
    suite = []
    for ring, stacked in [(6, 0), (6, 4), (7, 8), (8, 12), (8, 18)]:
        prob = random_layout_problem(rng, ring=ring, stacked=stacked)
        g = prob.graph
        radii = np.ones(g.n)
        for v, r in prob.boundary_radii.items():
            radii[v - 1] = r
        suite.append((f"n={g.n:3d} m={g.m:3d}", radii, _interior_csr(g)))
    return suite


def time_backend(backend, radii, csr, repeats):
    interior, flat, off = csr
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        _, resid, sweeps = backend.solve_radii(radii.copy(), interior, flat, off,
                                               1e-12, 50000)
        best = min(best, time.perf_counter() - t0)
        assert resid < 1e-12
    return best, sweeps


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    suite = build_suite()
    print(f"{'instance':<16} {'pure (ms)':>10} {'compiled (ms)':>14} {'speedup':>8}")
    for label, radii, csr in suite:
        t_pure, sweeps_pure = time_backend(pure, radii, csr, args.repeats)
        if compiled is not None:
            t_comp, sweeps_comp = time_backend(compiled, radii, csr, args.repeats)
            print(f"{label:<16} {t_pure * 1e3:>10.3f} {t_comp * 1e3:>14.3f} "
                  f"{t_pure / t_comp:>7.1f}x   (sweeps {sweeps_pure}/{sweeps_comp})")
        else:
            print(f"{label:<16} {t_pure * 1e3:>10.3f} {'unavailable':>14}")
    if compiled is None:
        print("compiled kernel not built; install with Cython to compare")


if __name__ == "__main__":
    main()
