# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: Laguerre-function tables and renormalized Bessel series."""
import numpy as np
cimport numpy as cnp
from libc.math cimport exp, sqrt, fabs

cnp.import_array()


def laguerre_function_table(int nmax, double alpha, const double[::1] u, double log_c0):
    """Orthonormal Laguerre functions ``phi_k(u)``, ``k < nmax``, as a ``(nmax, len(u))`` array."""
    cdef Py_ssize_t npts = u.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.zeros((nmax, npts), dtype=np.float64)
    cdef double[:, ::1] t = out
    cdef Py_ssize_t i, k
    cdef double b, d, c1
    if nmax == 0:
        return out
    for i in range(npts):
        t[0, i] = exp(log_c0 - 0.5 * u[i])
    if nmax == 1:
        return out
    d = sqrt(alpha + 1.0)
    for i in range(npts):
        t[1, i] = (alpha + 1.0 - u[i]) * t[0, i] / d
    # row-wise three-term recurrence: contiguous writes, two square roots per row
    for k in range(1, nmax - 1):
        b = sqrt(k * (k + alpha))
        d = sqrt((k + 1.0) * (k + alpha + 1.0))
        c1 = 2.0 * k + alpha + 1.0
        for i in range(npts):
            t[k + 1, i] = ((c1 - u[i]) * t[k, i] - b * t[k - 1, i]) / d
    return out


def tilde_series(double nu, const double[::1] q, double term0, int j0, double rtol, int maxterms):
    """Sum ``q**j / (j! Gamma(j+nu+1))`` for ``j >= j0`` at every entry of ``q``.

    ``term0`` is the coefficient of ``q**j0``; the caller supplies it so the
    reflection at negative integer orders stays in Python.
    """
    cdef Py_ssize_t n = q.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t i
    cdef int j
    cdef double term, s, qi
    for i in range(n):
        qi = q[i]
        term = term0
        for j in range(j0):
            term *= qi
        s = term
        j = j0
        while j < j0 + maxterms:
            term *= qi / ((j + 1.0) * (j + nu + 1.0))
            s += term
            j += 1
            if fabs(term) <= rtol * fabs(s) and j > fabs(qi):
                break
        o[i] = s
    return out
