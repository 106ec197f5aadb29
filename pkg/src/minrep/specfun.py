"""Scalar special functions: Gamma, renormalized Bessel J/I/K, Laguerre, Hermite.

Renormalized Bessel functions use the convention

    J~_nu(t) = (t/2)**(-nu) J_nu(t)      (and identically for I~, K~),

so J~ and I~ are even entire functions of ``t`` with J~_nu(0) = 1/Gamma(nu+1).

Small arguments are summed from the power series in the compiled kernel;
larger ones go through SciPy's Amos routines.  Polynomials come in a float
backend and an exact :class:`fractions.Fraction` backend.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

import numpy as np
from scipy import special as sps

from . import _kernels


class PoleError(ValueError):
    """Gamma evaluated at a nonpositive integer."""


class DomainError(ValueError):
    """Argument outside the function's domain."""


def gamma(x: float) -> float:
    """Gamma function on the real line.

    Raises :class:`PoleError` at nonpositive integers and ``OverflowError``
    once the value leaves the double range (x > ~171.6).
    """
    x = float(x)
    if x <= 0 and x == math.floor(x):
        raise PoleError(f"Gamma has a pole at {x:g}")
    return math.gamma(x)


def _series_start(nu: float) -> tuple[int, float]:
    """First nonzero index and its coefficient 1/(j0! Gamma(j0+nu+1))."""
    if nu < 0 and nu == math.floor(nu):
        j0 = int(-nu)
        return j0, 1.0 / math.factorial(j0)
    return 0, float(sps.rgamma(nu + 1.0))


def tilde_series(kind: str, nu: float, t, rtol: float = 1e-17, maxterms: int = 500):
    """Power series of J~_nu or I~_nu at real ``t`` (array in, array out)."""
    t = np.asarray(t, dtype=np.float64)
    q = 0.25 * t * t
    if kind == "J":
        q = -q
    elif kind != "I":
        raise ValueError(f"series only for J or I, got {kind!r}")
    j0, c0 = _series_start(nu)
    flat = np.ascontiguousarray(q.ravel())
    return _kernels.tilde_series(float(nu), flat, c0, j0, rtol, maxterms).reshape(t.shape)


def _series_cutoff(kind: str, nu: float) -> float:
    # the alternating J series loses digits once t > 2*sqrt(nu+1)
    if kind == "J":
        return 12.0
    return max(12.0, 2.0 * abs(nu))


def bessel_renorm(kind: str, nu: float, t):
    """Renormalized Bessel function ``(t/2)**(-nu) * Bessel_nu(t)`` for real ``t >= 0``.

    ``kind`` is ``"J"``, ``"I"`` or ``"K"``.  Accepts scalars or arrays.
    """
    kind = kind.upper()
    if kind not in ("J", "I", "K"):
        raise ValueError(f"unknown Bessel kind {kind!r}")
    nu = float(nu)
    arr = np.asarray(t, dtype=np.float64)
    if np.any(arr < 0):
        raise DomainError("renormalized Bessel functions are evaluated for t >= 0")
    if kind == "K":
        if np.any(arr == 0):
            raise DomainError("K~ is singular at t = 0")
        # K_{-nu} = K_nu; scipy's kv handles real order directly
        out = np.exp(-nu * np.log(arr / 2.0)) * sps.kv(nu, arr)
        return out if out.ndim else float(out)
    cut = _series_cutoff(kind, nu)
    out = np.empty_like(arr)
    small = arr <= cut
    if small.any():
        out[small] = tilde_series(kind, nu, arr[small])
    big = ~small
    if big.any():
        tb = arr[big]
        if kind == "J":
            out[big] = np.exp(-nu * np.log(tb / 2.0)) * sps.jv(nu, tb)
        else:
            # ive keeps the exponential growth out of the power
            out[big] = np.exp(tb - nu * np.log(tb / 2.0)) * sps.ive(nu, tb)
    return out if out.ndim else float(out)


def itilde_complex_scaled(nu: float, zsq):
    """I~_nu at complex argument, given ``zsq = z**2``; returns ``(S, shift)``.

    I~_nu(z) = S * exp(shift) with ``shift = |Re sqrt(zsq)|``.  Only ``z**2``
    enters because I~ is even, so no branch choice leaks into the result.
    """
    zsq = np.asarray(zsq, dtype=np.complex128)
    z = np.sqrt(zsq)
    shift = np.abs(z.real)
    out = np.empty(zsq.shape, dtype=np.complex128)
    small = np.abs(z) <= 8.0
    if small.any():
        q = 0.25 * zsq[small]
        j0, c0 = _series_start(nu)
        term = c0 * q**j0
        s = term.copy()
        for j in range(j0, j0 + 200):
            term = term * q / ((j + 1.0) * (j + nu + 1.0))
            s = s + term
            if np.all(np.abs(term) <= 1e-17 * np.abs(s)):
                break
        out[small] = s * np.exp(-shift[small])
    big = ~small
    if big.any():
        zb = z[big]
        out[big] = np.exp(-nu * np.log(zb / 2.0)) * sps.ive(nu, zb)
    return out, shift


def laguerre(k: int, alpha, x):
    """Generalized Laguerre polynomial ``L_k^alpha(x)`` by the three-term recurrence.

    With rational ``alpha`` and ``x`` (int or Fraction) the result is an exact
    Fraction; otherwise floats (NumPy arrays allowed).
    """
    if k < 0:
        raise ValueError("degree must be nonnegative")
    exact = isinstance(alpha, Rational) and isinstance(x, Rational)
    if exact:
        alpha, x = Fraction(alpha), Fraction(x)
        p0, p1 = Fraction(1), 1 + alpha - x
    else:
        x = np.asarray(x, dtype=float) if not np.isscalar(x) else float(x)
        alpha = float(alpha)
        p0, p1 = 1.0 + 0 * x, 1.0 + alpha - x
    if k == 0:
        return p0
    for j in range(1, k):
        p0, p1 = p1, ((2 * j + 1 + alpha - x) * p1 - (j + alpha) * p0) / (j + 1)
    return p1


def laguerre_coeffs(k: int, alpha) -> list[Fraction]:
    """Exact monomial coefficients of ``L_k^alpha``: ``[c_0, ..., c_k]``."""
    alpha = Fraction(alpha)
    out = []
    for j in range(k + 1):
        # binom(k+alpha, k-j) / j! * (-1)^j
        b = Fraction(1)
        for i in range(k - j):
            b *= (alpha + j + 1 + i)
        b /= math.factorial(k - j)
        out.append((-1) ** j * b / math.factorial(j))
    return out


def hermite(n: int, x):
    """Physicists' Hermite polynomial ``H_n(x)``; exact for rational ``x``."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    if isinstance(x, Rational):
        x = Fraction(x)
        h0, h1 = Fraction(1), 2 * x
    else:
        x = np.asarray(x, dtype=float) if not np.isscalar(x) else float(x)
        h0, h1 = 1.0 + 0 * x, 2 * x
    if n == 0:
        return h0
    for j in range(1, n):
        h0, h1 = h1, 2 * x * h1 - 2 * j * h0
    return h1


def hermite_coeffs(n: int) -> list[Fraction]:
    """Exact monomial coefficients of ``H_n``."""
    c0, c1 = [Fraction(1)], [Fraction(0), Fraction(2)]
    if n == 0:
        return c0
    for j in range(1, n):
        nxt = [Fraction(0)] + [2 * c for c in c1]
        for i, c in enumerate(c0):
            nxt[i] -= 2 * j * c
        c0, c1 = c1, nxt
    return c1

