"""NumPy fallback for the compiled kernels (same signatures, same results)."""
import numpy as np


def laguerre_function_table(nmax, alpha, u, log_c0):
    u = np.ascontiguousarray(u, dtype=np.float64)
    out = np.zeros((nmax, u.size))
    if nmax == 0:
        return out
    p0 = np.exp(log_c0 - 0.5 * u)
    out[0] = p0
    if nmax == 1:
        return out
    p1 = (alpha + 1.0 - u) * p0 / np.sqrt(alpha + 1.0)
    out[1] = p1
    for k in range(1, nmax - 1):
        p2 = ((2.0 * k + alpha + 1.0 - u) * p1 - np.sqrt(k * (k + alpha)) * p0) / np.sqrt(
            (k + 1.0) * (k + alpha + 1.0)
        )
        out[k + 1] = p2
        p0, p1 = p1, p2
    return out


def tilde_series(nu, q, term0, j0, rtol, maxterms):
    q = np.ascontiguousarray(q, dtype=np.float64)
    term = term0 * q**j0
    s = term.copy()
    active = np.ones(q.shape, dtype=bool)
    j = j0
    while j < j0 + maxterms and active.any():
        term = np.where(active, term * q / ((j + 1.0) * (j + nu + 1.0)), 0.0)
        s = s + term
        j += 1
        done = (np.abs(term) <= rtol * np.abs(s)) & (j > np.abs(q))
        active &= ~done
    return s
