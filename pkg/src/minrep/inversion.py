"""Unitary inversion operator: spectral form per sector and kernel form at rank 1.

On a sector the inversion is ``F = c * exp(i pi D_a)``.  The phase ``c`` is
fixed so that the ``ell = 0`` ground state is invariant, which gives

    F g_k = (-1)**k * exp(-i pi (nu - nu0) / 2) * g_k,     nu0 = (m - 2)/a.

At ``a = 2`` this is ``(-1)**k (-i)**ell``, the Euclidean Fourier transform.

The rank-1 kernel form acts on ``L^2((0, inf), c_mu x**(lam-1) dx)`` by

    (F f)(y) = 2**(-lam) Gamma(lam) int J~_{lam-1}(2 sqrt(x y)) f(x) c_mu x**(lam-1) dx.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate
from scipy.special import eval_genlaguerre, gammaln, jv

from . import specfun, spectral
from .sector import SectorModel
from .spectral import LaguerreExpansion

RANK1_NODES = 200
# second pass of F o F; larger tables put nodes where J~ is under-resolved
RANK1_MID_NODES = 100
NORM_NODES = 40


class CalibrationMissing(RuntimeError):
    """Kernel inversion requested before ``c_mu`` was calibrated."""


# ---------------------------------------------------------------------------
# Spectral backend


def ground_phase(sector: SectorModel) -> complex:
    """``c = exp(i pi (nu0 + 1)/2)`` so that the ``ell = 0`` ground state is fixed."""
    nu0 = float((sector.m - 2) / sector.a)
    return cmath.exp(1j * math.pi * (nu0 + 1) / 2)


def sector_phase(sector: SectorModel) -> complex:
    """``exp(-i pi (nu - nu0)/2)``: the eigenvalue of ``F`` on ``g_0`` of this sector."""
    nu0 = float((sector.m - 2) / sector.a)
    return cmath.exp(-1j * math.pi * (float(sector.nu) - nu0) / 2)


def eigenphases(sector: SectorModel, n: int) -> np.ndarray:
    """``F g_k = eigenphases[k] * g_k``."""
    return sector_phase(sector) * (-1.0) ** np.arange(n)


@dataclass(frozen=True)
class InversionOperator:
    sector: SectorModel
    phase: complex
    backend: str = "spectral"

    def apply(self, f: LaguerreExpansion) -> LaguerreExpansion:
        return invert_spectral(self.sector, f)

    def to_json(self, calibration=None) -> dict:
        return {
            "sector": self.sector.as_dict(),
            "phase": [self.phase.real, self.phase.imag],
            "backend": self.backend,
            "calibration": calibration or {"c_mu": None, "residual": None},
        }


def inversion_operator(sector: SectorModel) -> InversionOperator:
    return InversionOperator(sector, ground_phase(sector))


def invert_spectral(sector: SectorModel, f: LaguerreExpansion) -> LaguerreExpansion:
    """``c_k -> c * exp(i pi lambda_k) c_k``."""
    if f.sector != sector:
        raise ValueError("expansion belongs to a different sector")
    lam = spectral.eigenvalues(sector, f.n)
    mult = ground_phase(sector) * np.exp(1j * math.pi * lam)
    return LaguerreExpansion(sector, f.coeffs * mult, f.tail, dict(f.meta))


def inversion_kernel_values(sector: SectorModel, r, s) -> np.ndarray:
    """Sector kernel of ``F``: ``(rs)**ell / C_nu * c e^{-i pi (nu+1)/2} 2**(-nu-1) J~_nu(sqrt(u v))``."""
    r = np.atleast_1d(np.asarray(r, dtype=float))[:, None]
    s = np.atleast_1d(np.asarray(s, dtype=float))[None, :]
    nu = float(sector.nu)
    z = np.sqrt(spectral.u_of_r(sector, r) * spectral.u_of_r(sector, s))
    J = specfun.bessel_renorm("J", nu, z.ravel()).reshape(z.shape)
    pre = sector_phase(sector) * 2.0 ** (-nu - 1) / spectral.c_nu(sector)
    return pre * (r * s) ** sector.ell * J


def fourier_multiplier(ell: int, k: int) -> complex:
    """Action of the ``a = 2`` inversion on ``g_k`` of degree ``ell``: ``(-1)**k (-i)**ell``."""
    return (-1) ** k * (-1j) ** ell


# ---------------------------------------------------------------------------
# Rank-1 kernel backend


def rank1_eigenfunction(lam: float, k: int, x):
    """``f_k(x) = L_k^{lam-1}(2x) e^{-x}``."""
    x = np.asarray(x, dtype=float)
    return eval_genlaguerre(k, lam - 1, 2 * x) * np.exp(-x)


@dataclass
class RankOneModel:
    """Rank-1 model on ``(0, inf)`` with measure ``c_mu x**(lam-1) dx``.

    ``c_mu`` stays ``None`` until :meth:`calibrate` runs (or it is passed
    explicitly); the kernel operator refuses to run before that.
    """

    lam: float
    c_mu: float | None = None
    nodes: int = RANK1_NODES
    residual: float | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError("rank-1 model needs lambda > 0")

    def as_dict(self) -> dict:
        """Same model as the ``a = 1, ell = 0`` sector with ``nu = lam - 1`` (``u = 2x``)."""
        return {"lambda": self.lam, "a": "1", "ell": 0, "nu": self.lam - 1}

    def rule(self, n: int | None = None):
        """Nodes ``x_i`` and weights with ``int F x**(lam-1) dx ~ sum W_i F(x_i)``."""
        return spectral.laguerre_rule(n or self.nodes, float(self.lam) - 1.0)

    def prefactor(self) -> float:
        return math.exp(-self.lam * math.log(2) + gammaln(self.lam))

    def analytic_c_mu(self) -> float:
        """``2**lam / Gamma(lam)``: the value that makes ``F f_0 = f_0``."""
        return math.exp(self.lam * math.log(2) - gammaln(self.lam))

    def norm_rule(self, n: int = NORM_NODES):
        """Output grid for norms: exact on ``poly * exp(-2y)``, i.e. ``|f_k|**2``."""
        return spectral.scaled_rule(n, float(self.lam) - 1.0, 2.0)

    def norm(self, values, n: int = NORM_NODES) -> float:
        """``L^2(c_mu x**(lam-1) dx)`` norm of samples on :meth:`norm_rule` nodes (``c_mu = 1`` if unset)."""
        _, w = self.norm_rule(n)
        c = 1.0 if self.c_mu is None else self.c_mu
        return math.sqrt(c * float(np.sum(w * np.abs(values) ** 2)))

    def eigen_norm(self, k: int) -> float:
        """Exact ``||f_k||`` : ``c_mu 2**(-lam) Gamma(k+lam)/k!``."""
        c = 1.0 if self.c_mu is None else self.c_mu
        return math.sqrt(c * math.exp(-self.lam * math.log(2) + gammaln(k + self.lam) - gammaln(k + 1)))

    def _apply_raw(self, values, y, n: int | None = None, c_mu: float = 1.0):
        x, w = self.rule(n)
        y = np.atleast_1d(np.asarray(y, dtype=float))
        t = 2 * np.sqrt(np.outer(y, x))
        J = specfun.bessel_renorm("J", self.lam - 1, t.ravel()).reshape(t.shape)
        return self.prefactor() * c_mu * (J * w) @ np.asarray(values)

    def calibrate(self) -> "RankOneModel":
        """Fix ``c_mu`` by unitarity on ``f_0``; the residual is measured on ``f_1``."""
        x, _ = self.rule()
        y, w = self.norm_rule()

        def ratio(k, c_mu):
            out = self._apply_raw(rank1_eigenfunction(self.lam, k, x), y, c_mu=c_mu)
            inp = rank1_eigenfunction(self.lam, k, y)
            return math.sqrt(np.sum(w * np.abs(out) ** 2) / np.sum(w * inp**2))

        c_mu = 1.0 / ratio(0, 1.0)
        self.c_mu, self.residual = float(c_mu), float(abs(ratio(1, c_mu) - 1))
        self.meta["analytic_c_mu"] = self.analytic_c_mu()
        return self

    def calibration_json(self) -> dict:
        return {"c_mu": self.c_mu, "residual": self.residual}


def invert_kernel_rank1(model: RankOneModel, f, y, nodes: int | None = None) -> np.ndarray:
    """``F f`` at points ``y``; ``f`` is a callable or samples on ``model.rule(nodes)``."""
    if model.c_mu is None:
        raise CalibrationMissing("c_mu is not calibrated; call RankOneModel.calibrate()")
    x, _ = model.rule(nodes)
    vals = f(x) if callable(f) else np.asarray(f)
    if vals.shape != x.shape:
        raise ValueError("samples must sit on the model's quadrature nodes")
    return model._apply_raw(vals, y, nodes, model.c_mu)


def invert_twice_rank1(model: RankOneModel, f, y) -> np.ndarray:
    """``F(F f)`` through an intermediate table of :data:`RANK1_MID_NODES` points."""
    xm, _ = model.rule(RANK1_MID_NODES)
    mid = invert_kernel_rank1(model, f, xm)
    return invert_kernel_rank1(model, mid, y, RANK1_MID_NODES)


def invert_spectral_rank1(model: RankOneModel, coeffs) -> np.ndarray:
    """Spectral form on the ``f_k`` basis: ``(-1)**k``."""
    coeffs = np.asarray(coeffs, dtype=complex)
    return coeffs * (-1.0) ** np.arange(len(coeffs))


def rank1_synthesize(model: RankOneModel, coeffs, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return sum(c * rank1_eigenfunction(model.lam, k, x) for k, c in enumerate(coeffs))


# ---------------------------------------------------------------------------
# Checks


def hankel_transform(m: int, ell: int, phi, rho, rmax: float = 30.0) -> np.ndarray:
    """Fourier transform of ``phi(|x|) Y(x)`` with ``Y`` of degree ``ell`` on ``R^m`` by adaptive quadrature.

    Unitary normalization: ``(-i)**ell rho**(1-m/2) int J_{ell+m/2-1}(r rho) phi(r) r**(m/2) dr``.
    The integral is cut at ``rmax``; ``phi`` must be negligible beyond it.
    """
    order = ell + m / 2 - 1
    out = []
    for p in np.atleast_1d(rho):
        val, _ = integrate.quad(lambda r: jv(order, r * p) * phi(r) * r ** (m / 2), 0, rmax,
                                limit=400, epsabs=1e-13, epsrel=1e-11)
        out.append((-1j) ** ell * p ** (1 - m / 2) * val)
    return np.array(out)


def folding_check(m: int, phi, ell: int = 0, rho=None, n: int = spectral.DEFAULT_TRUNCATION) -> dict:
    """Compare the ``a = 2`` spectral inversion with the radial Hankel transform.

    ``phi`` is the radial profile of an even function (``ell`` even) on ``R^m``.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if ell % 2:
        raise ValueError("folding map identifies even functions: ell must be even")
    sector = SectorModel(2, m, ell)
    rho = np.linspace(0.1, 4.0, 12) if rho is None else np.asarray(rho, dtype=float)
    exp = spectral.analyze(phi, sector, n)
    spec = spectral.synthesize(invert_spectral(sector, exp), rho)
    direct = hankel_transform(m, ell, phi, rho)
    err = float(np.max(np.abs(spec - direct)))
    return {"m": m, "ell": ell, "sup_error": err, "passed": err <= 1e-6,
            "points": len(rho), "tail": exp.tail}


def intertwining_defect(sector: SectorModel, f: LaguerreExpansion) -> float:
    """``a = 2``: ``|| F(r^2 f) + Delta(F f) ||`` on coefficients, using ``Delta = 4 D + r^2``."""
    if sector.a != 2:
        raise ValueError("intertwining check is the a = 2 statement")
    r2 = lambda e: spectral.analyze(lambda r: r**2 * spectral.synthesize(e, r), sector, e.n)  # noqa: E731
    lhs = invert_spectral(sector, r2(f))
    Ff = invert_spectral(sector, f)
    lamv = spectral.eigenvalues(sector, f.n)
    lap = LaguerreExpansion(sector, 4 * lamv * Ff.coeffs + r2(Ff).coeffs)
    diff = lhs.normalized() + lap.normalized()
    return float(np.linalg.norm(diff[: f.n - 4]))


def kernel_local_integrability_probe(sector: SectorModel | None = None, lam: float | None = None,
                                     boxes=(2.0, 4.0, 8.0, 16.0), points: int = 400) -> dict:
    """Evidence-only probe: ``int int |K|`` over ``[0, R]^2`` against ``dmu x dmu``.

    Pass either a sector (``a`` in {1, 2}) or a rank-1 ``lam``.  Reports the
    integrals, a log-log growth exponent in ``R`` and the sup of ``|K|`` seen.
    """
    if (sector is None) == (lam is None):
        raise ValueError("give exactly one of sector or lam")
    report = {"sector": sector.as_dict() if sector else None, "lambda": lam,
              "boxes": list(boxes), "integrals": [], "sup_abs_kernel": 0.0,
              "growth_exponent": None, "conclusive": False}
    if sector is not None and sector.a not in (1, 2):
        report["note"] = "kernel backend only for a in {1, 2}"
        return report
    gx, gw = np.polynomial.legendre.leggauss(points)
    for R in boxes:
        r = (gx + 1) * R / 2
        w = gw * R / 2
        if sector is not None:
            K = inversion_kernel_values(sector, r, r)
            dens = r ** float(sector.measure_exponent)
        else:
            model = RankOneModel(lam, RankOneModel(lam).analytic_c_mu())
            t = 2 * np.sqrt(np.outer(r, r))
            K = model.prefactor() * model.c_mu * specfun.bessel_renorm(
                "J", lam - 1, t.ravel()).reshape(t.shape)
            dens = r ** (lam - 1)
        ww = w * dens
        report["integrals"].append(float(ww @ np.abs(K) @ ww))
        report["sup_abs_kernel"] = max(report["sup_abs_kernel"], float(np.max(np.abs(K))))
    if len(boxes) > 1 and all(v > 0 for v in report["integrals"]):
        slope = np.polyfit(np.log(boxes), np.log(report["integrals"]), 1)[0]
        report["growth_exponent"] = float(slope)
    return report
