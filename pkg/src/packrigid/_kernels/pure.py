"""Pure NumPy backend for the interior-radius iteration.

Same contract as the compiled backend: given per-vertex neighbor cycles in
CSR layout (0-based ids), drive every interior angle sum to 2*pi.  The
compiled backend sweeps Gauss-Seidel style with an exact monotone 1-d solve
per vertex; here the whole interior is updated at once with a bracketed
Newton step per sweep, which vectorizes well and converges to the same
unique solution.
"""

import numpy as np

TWO_PI = 2.0 * np.pi

BACKEND_NAME = "pure"


def _corner_arrays(interior, nbr_flat, nbr_off):
    owner = []
    a = []
    b = []
    for k in range(len(interior)):
        cyc = nbr_flat[nbr_off[k]:nbr_off[k + 1]]
        d = len(cyc)
        for t in range(d):
            owner.append(k)
            a.append(cyc[t])
            b.append(cyc[(t + 1) % d])
    return (np.asarray(owner, dtype=np.intp),
            np.asarray(a, dtype=np.intp),
            np.asarray(b, dtype=np.intp))


def _sums_and_derivs(radii, interior, owner, ca, cb):
    x = radii[interior][owner]
    y = radii[ca]
    z = radii[cb]
    p = x + y
    q = x + z
    u = 1.0 - 2.0 * y * z / (p * q)
    np.clip(u, -1.0, 1.0, out=u)
    ang = np.arccos(u)
    sin = np.sqrt(np.maximum(1.0 - u * u, 1e-300))
    dang = -(2.0 * y * z * (p + q) / (p * q) ** 2) / sin
    sums = np.zeros(len(interior))
    derivs = np.zeros(len(interior))
    np.add.at(sums, owner, ang)
    np.add.at(derivs, owner, dang)
    return sums, derivs


def angle_residuals(radii, interior, nbr_flat, nbr_off):
    """angle_sum - 2*pi for every interior vertex."""
    radii = np.asarray(radii, dtype=float)
    interior = np.asarray(interior, dtype=np.intp)
    if interior.size == 0:
        return np.zeros(0)
    owner, ca, cb = _corner_arrays(interior, nbr_flat, nbr_off)
    sums, _ = _sums_and_derivs(radii, interior, owner, ca, cb)
    return sums - TWO_PI


def solve_radii(radii0, interior, nbr_flat, nbr_off, tol, max_iter):
    """Iterate interior radii until max |angle_sum - 2*pi| < tol.

    Returns (radii, worst_residual, sweeps).  Each sweep applies one Newton
    step per interior vertex (the angle sum is strictly decreasing in the
    vertex's own radius), clamped to a relative trust region so iterates
    stay positive; near the solution the steps are plain Newton.
    """
    radii = np.array(radii0, dtype=float)
    interior = np.asarray(interior, dtype=np.intp)
    if interior.size == 0:
        return radii, 0.0, 0
    owner, ca, cb = _corner_arrays(interior, nbr_flat, nbr_off)
    worst = np.inf
    for sweep in range(1, max_iter + 1):
        sums, derivs = _sums_and_derivs(radii, interior, owner, ca, cb)
        resid = sums - TWO_PI
        worst = float(np.max(np.abs(resid)))
        if worst < tol:
            return radii, worst, sweep
        r = radii[interior]
        step = np.where(derivs < 0.0, resid / derivs, 0.0)
        cand = r - step
        cand = np.where(np.isfinite(cand), cand, r)
        np.clip(cand, 0.25 * r, 4.0 * r, out=cand)
        radii[interior] = cand
    return radii, worst, max_iter
