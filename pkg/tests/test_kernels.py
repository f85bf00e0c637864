import os
import subprocess
import sys

import numpy as np
import pytest

import packrigid
from packrigid import _kernels
from packrigid._kernels import pure
from packrigid.core import angle_sum
from packrigid.layout import _interior_csr, random_layout_problem, solve_interior_radii


def test_backend_reported():
    assert packrigid.KERNEL_BACKEND in ("compiled", "pure")


def test_pure_and_active_backends_agree(rng):
    for _ in range(10):
        prob = random_layout_problem(rng)
        g = prob.graph
        radii = np.ones(g.n)
        for v, r in prob.boundary_radii.items():
            radii[v - 1] = r
        interior, flat, off = _interior_csr(g)
        a, ra, _ = _kernels.solve_radii(radii, interior, flat, off, 1e-12, 20000)
        b, rb, _ = pure.solve_radii(radii, interior, flat, off, 1e-12, 20000)
        assert ra < 1e-12 and rb < 1e-12
        assert np.max(np.abs(a - b)) < 1e-9
        assert np.max(np.abs(_kernels.angle_residuals(a.copy(), interior, flat, off)
                             - pure.angle_residuals(a, interior, flat, off))) < 1e-12


def test_kernel_residuals_match_reference_angles(rng):
    prob = random_layout_problem(rng)
    g = prob.graph
    radii = solve_interior_radii(prob)
    interior, flat, off = _interior_csr(g)
    fast = _kernels.angle_residuals(radii.copy(), interior, flat, off)
    for k, v in enumerate(g.interior_vertices()):
        assert fast[k] == pytest.approx(angle_sum(radii, g, v) - 2 * np.pi, abs=1e-12)


def test_pure_backend_env_selection():
    code = subprocess.run(
        [sys.executable, "-c",
         "import packrigid; print(packrigid.KERNEL_BACKEND)"],
        env={**os.environ, "PACKRIGID_PURE": "1"},
        capture_output=True, text=True)
    assert code.stdout.strip() == "pure"
