"""Segal--Bargmann transforms: the rank-1 Bessel model and the classical Gaussian kernel.

Rank 1.  With ``f`` on ``(0, inf)`` and measure ``c_mu x**(lam-1) dx``,

    (B f)(z) = Gamma(lam) e^{-z/2} int I~_{lam-1}(2 sqrt(z x)) e^{-x} f(x) c_mu x**(lam-1) dx.

Expanding ``e^{-z/2} I~`` in ``z`` gives Taylor coefficients through the
moments ``M_j = int x**j e^{-x} f(x) x**(lam-1) dx``:

    a_n = Gamma(lam) c_mu sum_{j<=n} M_j / (j! Gamma(j+lam)) * (-1/2)**(n-j) / (n-j)!.

Summing over ``j`` inside the integral first turns the alternating moment sum
into one Laguerre polynomial, which is how it is evaluated here.

The Fock space carries ``||z**n||**2 = w_n`` with

    w_n = c_F * 2 pi * int rho**(2n+1) * rho**(2 lam - 2) K~_{lam-1}(rho) d rho
        = c_F * 2 pi * 4**(n+lam-1) * n! * Gamma(n+lam).
"""
from __future__ import annotations

import math
import warnings
from fractions import Fraction
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate
from scipy.special import gammaln, roots_hermite

from . import specfun, spectral
from .inversion import RankOneModel, rank1_eigenfunction

DEFAULT_TERMS = 20


class FockDivergence(ValueError):
    """Weight moments diverge (``lam <= 0``)."""


class TruncationWarning(UserWarning):
    """Taylor coefficients have not decayed at the truncation order."""


@dataclass
class FockSpaceModel:
    """Radial Fock weight ``c_F |z|**(2 lam - 2) K~_{lam-1}(|z|)`` on ``C``."""

    lam: float
    c_F: float = 1.0

    def __post_init__(self):
        if not self.lam > 0:
            raise FockDivergence("Fock weight moments diverge for lambda <= 0")

    def log_moment(self, n: int) -> float:
        """``log(w_n / c_F)``."""
        lam = self.lam
        return math.log(2 * math.pi) + (n + lam - 1) * math.log(4) + gammaln(n + 1) + gammaln(n + lam)

    def weights(self, nmax: int) -> np.ndarray:
        """``w_0 .. w_{nmax-1}``."""
        return self.c_F * np.exp([self.log_moment(n) for n in range(nmax)])

    def moment_quadrature(self, n: int) -> float:
        """``w_n`` by adaptive quadrature of the K-Bessel weight (the oracle for the closed form)."""
        nu = self.lam - 1
        p = 2 * n + 2 * self.lam - 1

        def integrand(rho):
            return rho**p * float(specfun.bessel_renorm("K", nu, rho))

        # split at 1: the small-rho end is integrable but steep for small lam
        lo, _ = integrate.quad(integrand, 0, 1, limit=400, epsabs=0, epsrel=1e-13)
        hi, _ = integrate.quad(integrand, 1, np.inf, limit=400, epsabs=0, epsrel=1e-13)
        return self.c_F * 2 * math.pi * (lo + hi)

    def analytic_c_F(self, c_mu: float) -> float:
        """``c_F`` that makes ``B`` isometric when the measure constant is ``c_mu``."""
        # ||B f_0||^2 = (Gamma(lam) c_mu 2^-lam)^2 w_0 must equal c_mu 2^-lam Gamma(lam)
        return math.exp(self.lam * math.log(2) - math.log(c_mu) - gammaln(self.lam) - self.log_moment(0))


def fock_norm(model: FockSpaceModel, coeffs) -> float:
    """``sqrt(sum |a_n|**2 w_n)``."""
    a = np.asarray(coeffs)
    return math.sqrt(float(np.sum(np.abs(a) ** 2 * model.weights(len(a)))))


@dataclass
class BargmannOperator:
    model: RankOneModel
    fock: FockSpaceModel
    nodes: int = 120
    meta: dict = field(default_factory=dict)

    def rule(self):
        """Scaled Laguerre rule, exact on ``poly * exp(-2x)`` against ``x**(lam-1) dx``."""
        return spectral.scaled_rule(self.nodes, self.model.lam - 1, 2.0)

    def calibrate_fock(self) -> "BargmannOperator":
        """Vacuum normalization: choose ``c_F`` with ``||B f_0|| = ||f_0||``."""
        if self.model.c_mu is None:
            raise ValueError("calibrate the measure constant c_mu first")
        self.fock.c_F = 1.0
        a = bargmann_apply(self, lambda x: rank1_eigenfunction(self.model.lam, 0, x), 1)
        self.fock.c_F = (self.model.eigen_norm(0) / fock_norm(self.fock, a)) ** 2
        return self

    def to_json(self, leakage=None, isometry_residual=None) -> dict:
        return {"lambda": self.model.lam, "c_mu": self.model.c_mu, "c_F": self.fock.c_F,
                "leakage": list(leakage or []), "isometry_residual": isometry_residual}


def bargmann_operator(lam: float, nodes: int = 120) -> BargmannOperator:
    """Both constants calibrated: ``c_mu`` by unitarity of the inversion, ``c_F`` by the vacuum."""
    model = RankOneModel(lam).calibrate()
    return BargmannOperator(model, FockSpaceModel(lam), nodes).calibrate_fock()


def taylor_kernel(nmax: int, lam: float, x) -> np.ndarray:
    """``(1/n!) d^n/dz^n [e^{-z/2} I~_{lam-1}(2 sqrt(z x))]`` at ``z = 0``, rows ``n < nmax``.

    The double sum over the two series collapses to
    ``(-1/2)**n L_n^{lam-1}(2x) / Gamma(n+lam)``, evaluated by recurrence.
    """
    x = np.asarray(x, dtype=float)
    flat = x.reshape(-1)
    n = np.arange(nmax)
    L = np.array([specfun.laguerre(k, lam - 1, 2 * flat) for k in range(nmax)])
    out = L * ((-0.5) ** n * np.exp(-gammaln(n + lam)))[:, None]
    return out.reshape((nmax,) + x.shape)


def taylor_kernel_exact(n: int, lam, x) -> Fraction:
    """Same coefficient from the raw product of the two power series, in exact arithmetic.

    Needs rational ``x`` and a ``lam`` with ``Gamma(j+lam)`` ratios rational,
    so it returns ``Gamma(lam) *`` the coefficient.
    """
    lam, x = Fraction(lam), Fraction(x)
    tot = Fraction(0)
    for j in range(n + 1):
        # Gamma(lam)/Gamma(j+lam) = 1/(lam)_j
        poch = Fraction(1)
        for i in range(j):
            poch *= lam + i
        tot += x**j / (math.factorial(j) * poch) * Fraction(-1, 2) ** (n - j) / math.factorial(n - j)
    return tot


def bargmann_apply(op: BargmannOperator, f, nmax: int = DEFAULT_TERMS, tail_tol: float = 1e-10) -> np.ndarray:
    """Taylor coefficients ``a_0 .. a_{nmax-1}`` of ``B f`` at ``z = 0``.

    ``f`` is a callable of ``x`` or samples on ``op.rule()`` nodes.
    """
    if op.model.c_mu is None:
        raise ValueError("measure constant c_mu is not calibrated")
    lam = op.model.lam
    x, w = op.rule()
    vals = np.asarray(f(x) if callable(f) else f, dtype=complex)
    # the rule absorbs e^{-2x}; x**(lam-1) e^{-x} f is poly * e^{-2x} on the eigenbasis
    P = taylor_kernel(nmax, lam, x)
    a = math.exp(gammaln(lam)) * op.model.c_mu * (P @ (w * np.exp(-x) * vals))
    contrib = np.abs(a) ** 2 * op.fock.weights(nmax)
    total = contrib.sum()
    if total > 0 and nmax > 3 and contrib[-3:].sum() > tail_tol * total:
        warnings.warn("Bargmann coefficients have not decayed at the truncation order",
                      TruncationWarning, stacklevel=2)
    return a


def monomial_leakage(coeffs, k: int, fock: FockSpaceModel) -> float:
    """Fock-norm fraction of ``coeffs`` outside index ``k``."""
    c = np.abs(np.asarray(coeffs)) ** 2 * fock.weights(len(coeffs))
    tot = c.sum()
    off = np.delete(c, k).sum()
    return float(math.sqrt(off / tot)) if tot > 0 else 0.0


def isometry_residual(op: BargmannOperator, kmax: int = 10, nmax: int | None = None) -> float:
    """``max_k | ||B f_k|| / ||f_k|| - 1 |`` over ``k <= kmax``."""
    nmax = nmax or max(DEFAULT_TERMS, kmax + 6)
    res = 0.0
    for k in range(kmax + 1):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", TruncationWarning)
            a = bargmann_apply(op, lambda x: rank1_eigenfunction(op.model.lam, k, x), nmax)
        res = max(res, abs(fock_norm(op.fock, a) / op.model.eigen_norm(k) - 1))
    return res


def cayley_consistency(op: BargmannOperator, kmax: int = 5, tol: float = 1e-7) -> dict:
    """Monomial images of ``f_0 .. f_kmax`` and the isometry residual.

    ``B`` diagonalizes the same weight operator that the inversion
    factorization conjugates; at rank 1 this is the statement that ``f_k``
    lands on the ``z**k`` direction.
    """
    nmax = max(DEFAULT_TERMS, kmax + 6)
    leak = []
    for k in range(kmax + 1):
        a = bargmann_apply(op, lambda x: rank1_eigenfunction(op.model.lam, k, x), nmax)
        leak.append(monomial_leakage(a, k, op.fock))
    iso = isometry_residual(op, kmax, nmax)
    rep = op.to_json(leak, iso)
    rep["passed"] = bool(max(leak) <= tol and iso <= 1e-6)
    return rep


# ---------------------------------------------------------------------------
# Classical transform on R^m


CLASSICAL_NODES = 80


def _hermite_rule(n=CLASSICAL_NODES):
    """Gauss--Hermite for ``int g(x) e^{-2x^2} dx``."""
    y, w = roots_hermite(n)
    return y / math.sqrt(2), w / math.sqrt(2)


def classical_basis(n: int, x):
    """Kernel-adapted Hermite functions ``H_n(sqrt(2) x) e^{-x^2}``."""
    x = np.asarray(x, dtype=float)
    return specfun.hermite(n, math.sqrt(2) * x) * np.exp(-x * x)


def _classical_rows(nmax, x):
    # row n: 2**(-n/2)/n! * H_n(sqrt(2) x), the z**n coefficient of exp(-z^2/2 + 2 z x)
    return np.array([specfun.hermite(n, math.sqrt(2) * x) * math.exp(-0.5 * n * math.log(2) - gammaln(n + 1))
                     for n in range(nmax)])


def classical_bargmann(m: int, f, nmax: int = DEFAULT_TERMS) -> np.ndarray:
    """Taylor coefficients of ``int exp(-<z,z>/2 + 2<z,x> - <x,x>) f(x) dx`` for ``m`` in {1, 2}.

    ``f`` is vectorized over its ``m`` coordinate arrays.  Returns shape
    ``(nmax,)`` or ``(nmax, nmax)``.
    """
    x, w = _hermite_rule()
    rows = _classical_rows(nmax, x)
    if m == 1:
        # f e^{-x^2} / e^{-2x^2} = f e^{x^2}
        return rows @ (w * f(x) * np.exp(x * x))
    if m == 2:
        X1, X2 = np.meshgrid(x, x, indexing="ij")
        F = f(X1, X2) * np.exp(X1**2 + X2**2) * np.outer(w, w)
        return rows @ F @ rows.T
    raise ValueError("classical transform implemented for m in {1, 2}")


def classical_fock_norm(coeffs) -> float:
    """Norm against ``e^{-|z|^2} d^2 z`` per variable: ``||z^n||**2 = pi n!``."""
    a = np.asarray(coeffs)
    n = np.arange(a.shape[0])
    w1 = math.pi * np.exp(gammaln(n + 1))
    w = w1 if a.ndim == 1 else np.outer(w1, w1)
    return math.sqrt(float(np.sum(np.abs(a) ** 2 * w)))


def classical_l2_norm(m: int, f) -> float:
    x, w = _hermite_rule()
    if m == 1:
        return math.sqrt(float(np.sum(w * np.abs(f(x)) ** 2 * np.exp(2 * x * x))))
    X1, X2 = np.meshgrid(x, x, indexing="ij")
    F = np.abs(f(X1, X2)) ** 2 * np.exp(2 * (X1**2 + X2**2))
    return math.sqrt(float(np.sum(np.outer(w, w) * F)))


def classical_constant(m: int) -> float:
    """Calibrated ratio ``||B f|| / ||f||`` from the ground state ``e^{-|x|^2}``."""
    if m == 1:
        g = lambda x: np.exp(-x * x)  # noqa: E731
    else:
        g = lambda x1, x2: np.exp(-x1 * x1 - x2 * x2)  # noqa: E731
    return classical_fock_norm(classical_bargmann(m, g, 4)) / classical_l2_norm(m, g)
