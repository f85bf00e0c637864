# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled backend for the interior-radius iteration (see pure.py for the contract)."""

import numpy as np

cimport numpy as cnp
from libc.math cimport acos, fabs, sqrt

cnp.import_array()

cdef double TWO_PI = 6.283185307179586476925286766559

BACKEND_NAME = "compiled"


cdef inline double _angle(double x, double y, double z) nogil:
    cdef double a = x + y
    cdef double b = x + z
    cdef double c = y + z
    cdef double u = (a * a + b * b - c * c) / (2.0 * a * b)
    if u > 1.0:
        u = 1.0
    elif u < -1.0:
        u = -1.0
    return acos(u)


cdef double _vertex_sum(double[:] radii, Py_ssize_t[:] nbr_flat,
                        Py_ssize_t start, Py_ssize_t stop, double rv) nogil:
    cdef double total = 0.0
    cdef Py_ssize_t t, d = stop - start
    for t in range(d):
        total += _angle(rv, radii[nbr_flat[start + t]],
                        radii[nbr_flat[start + (t + 1) % d]])
    return total


cdef double _vertex_deriv(double[:] radii, Py_ssize_t[:] nbr_flat,
                          Py_ssize_t start, Py_ssize_t stop, double rv) nogil:
    cdef double total = 0.0
    cdef double y, z, p, q, u, sin
    cdef Py_ssize_t t, d = stop - start
    for t in range(d):
        y = radii[nbr_flat[start + t]]
        z = radii[nbr_flat[start + (t + 1) % d]]
        p = rv + y
        q = rv + z
        u = 1.0 - 2.0 * y * z / (p * q)
        if u > 1.0:
            u = 1.0
        elif u < -1.0:
            u = -1.0
        sin = sqrt(1.0 - u * u)
        if sin < 1e-150:
            sin = 1e-150
        total += -(2.0 * y * z * (p + q) / ((p * q) * (p * q))) / sin
    return total


def angle_residuals(radii, interior, nbr_flat, nbr_off):
    """angle_sum - 2*pi for every interior vertex."""
    cdef double[:] r = np.ascontiguousarray(radii, dtype=np.float64)
    cdef Py_ssize_t[:] idx = np.ascontiguousarray(interior, dtype=np.intp)
    cdef Py_ssize_t[:] flat = np.ascontiguousarray(nbr_flat, dtype=np.intp)
    cdef Py_ssize_t[:] off = np.ascontiguousarray(nbr_off, dtype=np.intp)
    out = np.empty(idx.shape[0])
    cdef double[:] o = out
    cdef Py_ssize_t k
    for k in range(idx.shape[0]):
        o[k] = _vertex_sum(r, flat, off[k], off[k + 1], r[idx[k]]) - TWO_PI
    return out


def solve_radii(radii0, interior, nbr_flat, nbr_off, double tol, int max_iter):
    """Gauss-Seidel sweeps with a bracketed-Newton monotone solve per vertex.

    Returns (radii, worst_residual, sweeps).
    """
    radii = np.array(radii0, dtype=np.float64)
    cdef double[:] r = radii
    cdef Py_ssize_t[:] idx = np.ascontiguousarray(interior, dtype=np.intp)
    cdef Py_ssize_t[:] flat = np.ascontiguousarray(nbr_flat, dtype=np.intp)
    cdef Py_ssize_t[:] off = np.ascontiguousarray(nbr_off, dtype=np.intp)
    cdef Py_ssize_t nint = idx.shape[0]
    if nint == 0:
        return radii, 0.0, 0

    cdef double rbar = 0.0
    cdef Py_ssize_t k, v, it
    for k in range(r.shape[0]):
        rbar += r[k]
    rbar /= r.shape[0]
    cdef double lo0 = 1e-9 * rbar
    cdef double hi0 = 1e9 * rbar

    cdef double worst = 0.0, resid, rv, lo, hi, deriv, cand, inner_tol
    cdef int sweep, inner
    inner_tol = tol * 0.25
    if inner_tol < 1e-15:
        inner_tol = 1e-15
    for sweep in range(1, max_iter + 1):
        worst = 0.0
        for k in range(nint):
            v = idx[k]
            rv = r[v]
            lo = lo0
            hi = hi0
            resid = _vertex_sum(r, flat, off[k], off[k + 1], rv) - TWO_PI
            if fabs(resid) > worst:
                worst = fabs(resid)
            for inner in range(200):
                if fabs(resid) <= inner_tol:
                    break
                if resid > 0.0:      # sum too large: radius too small
                    if rv > lo:
                        lo = rv
                else:
                    if rv < hi:
                        hi = rv
                deriv = _vertex_deriv(r, flat, off[k], off[k + 1], rv)
                cand = rv - resid / deriv
                if not (lo < cand < hi):
                    cand = 0.5 * (lo + hi)
                if cand == rv:
                    break
                rv = cand
                resid = _vertex_sum(r, flat, off[k], off[k + 1], rv) - TWO_PI
            r[v] = rv
        if worst < tol:
            return radii, worst, sweep
    return radii, worst, max_iter
