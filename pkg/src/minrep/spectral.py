"""Laguerre eigen-expansions, spectra and holomorphic semigroups of ``D_a`` per sector.

Sector ``(a, m, ell)`` carries the radial measure ``r**(m+a-3) dr`` and the
eigenfunctions

    g_k(r) = r**ell * L_k^nu(u) * exp(-u/2),    u = (2/a) r**a,

with ``D_a g_k = -(k + (nu+1)/2) g_k`` and ``nu = (2 ell + m - 2)/a``.  All
quadrature runs in ``u`` where the measure becomes ``C_nu u**nu du`` with
``C_nu = (a/2)**nu / 2``.

The semigroup kernel comes from the Hardy--Hille bilinear sum.  Written with
``I~_nu`` and ``tau = t/2`` it reads

    K_t(r, s) = (r s)**ell / C_nu * (2 sinh tau)**(-nu-1)
                * exp(-(u+v) coth(tau) / 2) * I~_nu(sqrt(u v) / sinh tau),

which only needs ``z**2 = u v / sinh(tau)**2`` and so has no branch
ambiguity for complex ``t``.
"""
from __future__ import annotations

import logging
import math
import os
import struct
import tempfile
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import gammaln

from . import _kernels, specfun
from .sector import SectorModel

log = logging.getLogger(__name__)

DEFAULT_NODES = 200
DEFAULT_TRUNCATION = 60


class QuadratureError(ValueError):
    """Requested more basis functions than the node table resolves, or an unresolved tail."""


class NotHilbertSchmidt(ValueError):
    """Raised for ``Re t <= 0`` where the semigroup is not Hilbert--Schmidt."""


class SingularParameter(ValueError):
    """``exp(-t) == 1``: the generating function has a pole."""


# ---------------------------------------------------------------------------
# Gauss--Laguerre rules


def laguerre_functions(n: int, alpha: float, u) -> np.ndarray:
    """Orthonormal Laguerre functions ``sqrt(k!/Gamma(k+alpha+1)) L_k^alpha(u) e^{-u/2}``.

    Shape ``(n, len(u))``; orthonormal against ``u**alpha du`` on ``(0, inf)``.
    """
    u = np.ascontiguousarray(np.atleast_1d(np.asarray(u, dtype=np.float64)))
    return _kernels.laguerre_function_table(int(n), float(alpha), u, -0.5 * float(gammaln(alpha + 1.0)))


@lru_cache(maxsize=64)
def laguerre_rule(n: int, alpha: float) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and Laguerre-function weights for ``int F(u) u**alpha du``.

    The weights are ``w_i exp(u_i)`` for the classical Gauss rule, obtained as
    the reciprocal Christoffel sum of the orthonormal functions, so they never
    overflow.  Exact when ``F`` is a polynomial of degree < 2n times ``e^{-u}``.
    """
    if alpha <= -1:
        raise ValueError("Laguerre weight needs alpha > -1")
    k = np.arange(n, dtype=float)
    diag = 2 * k + alpha + 1
    off = np.sqrt(k[1:] * (k[1:] + alpha))
    nodes = eigh_tridiagonal(diag, off, eigvals_only=True)
    nodes = _newton_polish(n, alpha, nodes)
    tab = laguerre_functions(n, alpha, nodes)
    weights = 1.0 / np.sum(tab * tab, axis=0)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def _newton_polish(n, alpha, x, steps=2):
    # one or two Newton steps on L_n; derivative from x L_n' = n L_n - (n+alpha) L_{n-1}
    for _ in range(steps):
        tab = laguerre_functions(n + 1, alpha, x)
        pn, pm = tab[n], tab[n - 1]
        # normalized: L_n ~ pn * c_n, L_{n-1} ~ pm * c_{n-1}; ratio c_{n-1}/c_n = sqrt(n/(n+alpha))
        ratio = np.sqrt(n / (n + alpha))
        # L_n / L_n' = x pn / (n pn - (n+alpha) pm * ratio)  (the exp factor cancels)
        denom = n * pn - (n + alpha) * pm * ratio
        with np.errstate(divide="ignore", invalid="ignore"):
            dx = np.where(denom != 0, x * pn / denom, 0.0)
        x = x - dx
    return x


def scaled_rule(n: int, alpha: float, beta: float):
    """Rule for ``int F(u) u**alpha du`` exact on ``poly * exp(-beta u)``."""
    x, w = laguerre_rule(n, float(alpha))
    return x / beta, w * beta ** (-alpha - 1.0)


def cache_dir() -> Path:
    env = os.environ.get("MINREP_CACHE")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "minrep"


_HEADER = struct.Struct("<dIII")


def node_table_path(sector: SectorModel, n: int, directory: Path | None = None) -> Path:
    d = Path(directory) if directory is not None else cache_dir()
    return d / f"nodes_a{float(sector.a)!r}_m{sector.m}_l{sector.ell}_N{n}.bin"


def write_node_table(path: Path, sector: SectorModel, nodes, weights) -> None:
    """Header ``<a:f64, m:u32, ell:u32, N:u32>`` then N little-endian ``(node, weight)`` pairs."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    pairs = np.empty((len(nodes), 2), dtype="<f8")
    pairs[:, 0], pairs[:, 1] = nodes, weights
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".nodes-")
    with os.fdopen(fd, "wb") as fh:
        fh.write(_HEADER.pack(float(sector.a), sector.m, sector.ell, len(nodes)))
        fh.write(pairs.tobytes())
    os.replace(tmp, path)


def read_node_table(path: Path):
    """Returns ``(a, m, ell, nodes, weights)``."""
    raw = Path(path).read_bytes()
    a, m, ell, n = _HEADER.unpack_from(raw)
    pairs = np.frombuffer(raw, dtype="<f8", offset=_HEADER.size, count=2 * n).reshape(n, 2)
    return a, m, ell, pairs[:, 0].copy(), pairs[:, 1].copy()


def sector_rule(sector: SectorModel, n: int = DEFAULT_NODES, use_cache: bool = True):
    """Nodes ``u_i`` and weights for the sector, read from or written to the disk cache."""
    if use_cache:
        path = node_table_path(sector, n)
        if path.exists():
            try:
                a, m, ell, x, w = read_node_table(path)
                if (a, m, ell, len(x)) == (float(sector.a), sector.m, sector.ell, n):
                    return x, w
            except (OSError, struct.error, ValueError):
                log.warning("ignoring unreadable node table %s", path)
    x, w = laguerre_rule(n, float(sector.nu))
    if use_cache:
        try:
            write_node_table(node_table_path(sector, n), sector, x, w)
        except OSError as exc:
            log.warning("node table cache not writable: %s", exc)
    return x, w


# ---------------------------------------------------------------------------
# Sector helpers


def _f(x) -> float:
    return float(x)


def c_nu(sector: SectorModel) -> float:
    """``C_nu = (a/2)**nu / 2``: ``r**(m+a-3) dr = C_nu u**nu r**(-2 ell) du``."""
    return 0.5 * (_f(sector.a) / 2.0) ** _f(sector.nu)


def log_norms(sector: SectorModel, n: int) -> np.ndarray:
    """``log h_k`` with ``h_k = ||g_k||**2 = C_nu Gamma(k+nu+1)/k!``."""
    k = np.arange(n, dtype=float)
    nu = _f(sector.nu)
    return math.log(c_nu(sector)) + gammaln(k + nu + 1) - gammaln(k + 1)


def u_of_r(sector: SectorModel, r):
    a = _f(sector.a)
    return (2.0 / a) * np.asarray(r, dtype=float) ** a


def r_of_u(sector: SectorModel, u):
    a = _f(sector.a)
    return (a * np.asarray(u, dtype=float) / 2.0) ** (1.0 / a)


def eigenvalues(sector: SectorModel, n: int) -> np.ndarray:
    """``lambda_k = -(k + (nu+1)/2)``, ``k < n``."""
    return -(np.arange(n) + (_f(sector.nu) + 1.0) / 2.0)


def spectrum(sector: SectorModel, count: int):
    """First ``count`` eigenvalues of ``D_a`` on the sector; exact Fractions for rational ``a``."""
    if count < 1:
        raise ValueError("count must be >= 1")
    if sector.exact:
        return [-(k + (sector.nu + 1) / 2) for k in range(count)]
    return list(eigenvalues(sector, count))


def merged_spectrum(a, m: int, count: int, ell_max: int | None = None):
    """Distinct eigenvalues of ``D_a`` on ``L^2(R^m, |x|^(a-2) dx)``, top ``count`` values.

    Sectors whose harmonic space is zero (``m = 1``, ``ell >= 2``) are skipped.
    """
    from .cones import harmonic_dim

    probe = SectorModel(a, m, 0)
    ell_max = ell_max if ell_max is not None else 2 * count + 2
    vals = set()
    for ell in range(ell_max + 1):
        if harmonic_dim(m, ell) == 0:
            continue
        vals.update(spectrum(SectorModel(probe.a, m, ell), count))
    return sorted(vals, reverse=True)[:count]


def lowest_weight(sector: SectorModel):
    """Minimal K-type of the SL(2) factor: ``(2 ell + m - 2)/a + 1``."""
    return sector.nu + 1


# ---------------------------------------------------------------------------
# Expansions


@dataclass
class LaguerreExpansion:
    """Coefficients ``c_k`` of ``f = sum c_k g_k`` (unnormalized eigenfunctions)."""

    sector: SectorModel
    coeffs: np.ndarray
    tail: float = 0.0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=complex)

    @property
    def n(self) -> int:
        return len(self.coeffs)

    def normalized(self) -> np.ndarray:
        """Coefficients against the orthonormal basis ``g_k / sqrt(h_k)``."""
        return self.coeffs * np.exp(0.5 * log_norms(self.sector, self.n))

    @classmethod
    def from_normalized(cls, sector, d, **kw) -> "LaguerreExpansion":
        d = np.asarray(d, dtype=complex)
        return cls(sector, d * np.exp(-0.5 * log_norms(sector, len(d))), **kw)

    def norm(self) -> float:
        return float(np.linalg.norm(self.normalized()))

    def __call__(self, r):
        return synthesize(self, r)


def basis_values(sector: SectorModel, n: int, r) -> np.ndarray:
    """Orthonormal eigenfunctions ``g_k / sqrt(h_k)`` at ``r``; shape ``(n, len(r))``."""
    r = np.atleast_1d(np.asarray(r, dtype=float))
    tab = laguerre_functions(n, _f(sector.nu), u_of_r(sector, r))
    return tab * (r ** sector.ell / math.sqrt(c_nu(sector)))


def eigenfunction_values(sector: SectorModel, k: int, r) -> np.ndarray:
    """Unnormalized ``g_k(r)``."""
    return basis_values(sector, k + 1, r)[k] * math.exp(0.5 * log_norms(sector, k + 1)[k])


def analyze(f, sector: SectorModel, n: int = DEFAULT_TRUNCATION, nodes: int = DEFAULT_NODES,
            tail_tol: float = 1e-12) -> LaguerreExpansion:
    """Project ``f`` onto the first ``n`` eigenfunctions.

    ``f`` is a callable of ``r`` or an array of samples at the sector's
    quadrature nodes ``r_of_u(sector, u_i)``.
    """
    if n > nodes:
        raise QuadratureError(f"{n} basis functions exceed the {nodes}-node table")
    u, w = sector_rule(sector, nodes)
    r = r_of_u(sector, u)
    vals = np.asarray(f(r) if callable(f) else f, dtype=complex)
    if vals.shape != u.shape:
        raise QuadratureError("samples must match the quadrature nodes")
    F = vals / r ** sector.ell
    mass = w * np.abs(F) ** 2
    total = mass.sum()
    if not np.isfinite(total):
        raise QuadratureError("function is not square-integrable on the node grid")
    if total > 0 and mass[-nodes // 10:].sum() > tail_tol * total:
        raise QuadratureError("function mass sits in the last nodes; tail is not resolved")
    tab = laguerre_functions(n, _f(sector.nu), u)
    d = math.sqrt(c_nu(sector)) * (tab * w) @ F
    tail = float(np.sqrt(np.sum(np.abs(d[-5:]) ** 2)))
    return LaguerreExpansion.from_normalized(sector, d, tail=tail,
                                             meta={"norm2_quadrature": float(total * c_nu(sector))})


def synthesize(exp: LaguerreExpansion, r) -> np.ndarray:
    return exp.normalized() @ basis_values(exp.sector, exp.n, r)


# ---------------------------------------------------------------------------
# Semigroup


def _check_t(t):
    t = complex(t)
    if t.real < 0:
        raise ValueError("holomorphic semigroup needs Re t >= 0")
    return t


def semigroup_apply(t, f: LaguerreExpansion) -> LaguerreExpansion:
    """``e^{tD}``: ``c_k -> exp(t lambda_k) c_k``."""
    t = _check_t(t)
    lam = eigenvalues(f.sector, f.n)
    return LaguerreExpansion(f.sector, f.coeffs * np.exp(t * lam), f.tail, dict(f.meta))


def _kernel_hat(sector: SectorModel, t: complex, u, v):
    """``K_t / (r s)**ell`` on broadcast arrays of ``u``, ``v``."""
    w = np.exp(-t)
    if abs(1 - w) < 1e-14:
        raise SingularParameter("exp(-t) = 1: t is a multiple of 2 pi i")
    nu = _f(sector.nu)
    half = t / 2
    coth = np.cosh(half) / np.sinh(half)
    zsq = u * v / np.sinh(half) ** 2
    S, shift = specfun.itilde_complex_scaled(nu, zsq)
    logpre = -t * (nu + 1) / 2 - (nu + 1) * np.log(1 - w)
    return np.exp(logpre - (u + v) * coth / 2 + shift) * S / c_nu(sector)


def kernel_values(sector: SectorModel, t, r, s) -> np.ndarray:
    """Closed-form kernel ``K_t(r_i, s_j)`` on the grid ``r x s`` (``Re t > 0`` or unitary ``Re t = 0``)."""
    t = _check_t(t)
    r = np.atleast_1d(np.asarray(r, dtype=float))[:, None]
    s = np.atleast_1d(np.asarray(s, dtype=float))[None, :]
    return (r * s) ** sector.ell * _kernel_hat(sector, t, u_of_r(sector, r), u_of_r(sector, s))


def spectral_kernel_values(sector: SectorModel, t, r, s, n: int = DEFAULT_TRUNCATION) -> np.ndarray:
    """Truncated ``sum_k exp(t lambda_k) g_k(r) g_k(s) / h_k`` (the independent oracle)."""
    t = _check_t(t)
    br = basis_values(sector, n, r)
    bs = basis_values(sector, n, s)
    return (br.T * np.exp(t * eigenvalues(sector, n))) @ bs


def boundary_kernel_values(sector: SectorModel, theta: float, r, s,
                           eps=(1e-2, 5e-3, 2.5e-3)) -> np.ndarray:
    """Kernel of the unitary ``e^{i theta D}`` as the Richardson limit ``Re t -> 0``."""
    e1, e2, e4 = eps
    if not (math.isclose(e2, e1 / 2) and math.isclose(e4, e1 / 4)):
        raise ValueError("Richardson weights assume halving steps")
    k1, k2, k4 = (kernel_values(sector, e + 1j * theta, r, s) for e in eps)
    return (k1 - 6 * k2 + 8 * k4) / 3


@dataclass
class KernelOperator:
    """Quadrature-discretized integral operator ``(Kf)(r) = int K(r, s) f(s) dmu(s)``."""

    sector: SectorModel
    kernel: object  # callable (r, s) -> matrix
    nodes_in: np.ndarray  # r-values of the input quadrature
    weights_in: np.ndarray  # weights for dmu at nodes_in
    meta: dict = field(default_factory=dict)

    def matrix(self, r_out) -> np.ndarray:
        return self.kernel(r_out, self.nodes_in) * self.weights_in[None, :]

    def apply(self, f, r_out) -> np.ndarray:
        vals = f(self.nodes_in) if callable(f) else np.asarray(f)
        return self.matrix(r_out) @ vals

    def values(self, r, s) -> np.ndarray:
        return self.kernel(r, s)


def measure_rule(sector: SectorModel, nodes: int = DEFAULT_NODES, beta: float = 1.0):
    """``(r_i, W_i)`` with ``int f dmu ~ sum W_i f(r_i)`` for ``f ~ r**(2 ell) poly(u) e^{-beta u}``."""
    u, w = scaled_rule(nodes, _f(sector.nu), beta)
    r = r_of_u(sector, u)
    return r, c_nu(sector) * w / r ** (2 * sector.ell)


def semigroup_kernel(sector: SectorModel, t, nodes: int = DEFAULT_NODES) -> KernelOperator:
    """Kernel form of ``e^{tD}``; ``Re t > 0`` (``Re t = 0`` goes through the Richardson limit)."""
    t = _check_t(t)
    if abs(1 - np.exp(-t)) < 1e-14:
        raise SingularParameter("exp(-t) = 1: t is a multiple of 2 pi i")
    r_in, w_in = measure_rule(sector, nodes)
    if t.real > 0:
        ker = lambda r, s: kernel_values(sector, t, r, s)  # noqa: E731
    else:
        ker = lambda r, s: boundary_kernel_values(sector, t.imag, r, s)  # noqa: E731
    op = KernelOperator(sector, ker, r_in, w_in, {"t": [t.real, t.imag]})
    op.meta["calibration"] = calibrate_kernel(op) if t.real > 0 else None
    return op


def calibrate_kernel(op: KernelOperator) -> float:
    """Ratio ``<e^{tD} g_0, g_0> / <K g_0, g_0>``; 1 when the closed-form constant is right."""
    sec = op.sector
    t = complex(op.meta["t"][0], op.meta["t"][1])
    r_probe = np.array([0.5, 1.0])
    k_vals = op.apply(lambda s: eigenfunction_values(sec, 0, s), r_probe)
    spec_vals = np.exp(t * eigenvalues(sec, 1)[0]) * eigenfunction_values(sec, 0, r_probe)
    return float(np.real(np.vdot(k_vals, spec_vals) / np.vdot(k_vals, k_vals)))


def mehler_sector_kernel(t, r, s, parity: int = 0) -> np.ndarray:
    """Classical Mehler kernel of ``e^{-(t/2) H}``, ``H = (-d^2 + x^2)/2``, folded onto ``r, s > 0``.

    ``parity`` 0 gives ``M(r,s) + M(r,-s)`` (even functions), 1 gives the odd part.
    """
    tau = complex(t) / 2
    r = np.atleast_1d(np.asarray(r, dtype=float))[:, None]
    s = np.atleast_1d(np.asarray(s, dtype=float))[None, :]
    sh, ch = np.sinh(tau), np.cosh(tau)
    pre = (2 * np.pi * sh) ** -0.5
    plus = np.exp(-((r * r + s * s) * ch - 2 * r * s) / (2 * sh))
    minus = np.exp(-((r * r + s * s) * ch + 2 * r * s) / (2 * sh))
    return pre * (plus + minus if parity == 0 else plus - minus)


# ---------------------------------------------------------------------------
# Hilbert--Schmidt norms


def hs_norm_spectral(sector: SectorModel, t) -> float:
    """``sqrt(sum_k exp(2 Re(t) lambda_k))`` summed in closed form."""
    t = complex(t)
    if t.real <= 0:
        raise NotHilbertSchmidt("not Hilbert-Schmidt for Re t <= 0")
    x = t.real
    lead = -x * (_f(sector.nu) + 1)
    return math.sqrt(math.exp(lead) / -math.expm1(-2 * x))


def hs_norm_kernel(sector: SectorModel, t, nodes: int = DEFAULT_NODES) -> float:
    """``sqrt(int int |K_t|^2 dmu dmu)`` by a 2-D Laguerre rule scaled to the kernel's decay."""
    t = complex(t)
    if t.real <= 0:
        raise NotHilbertSchmidt("not Hilbert-Schmidt for Re t <= 0")
    half = t / 2
    beta = (np.cosh(half) / np.sinh(half)).real - abs((1 / np.sinh(half)).real)
    beta = float(min(1.0, max(beta, 1e-3)))
    u, w = scaled_rule(nodes, _f(sector.nu), beta)
    K = _kernel_hat(sector, t, u[:, None], u[None, :])
    return float(c_nu(sector) * math.sqrt(np.einsum("i,ij,j->", w, np.abs(K) ** 2, w)))


def hs_norm(sector: SectorModel, t, full_space: bool = False, ell_max: int = 400) -> float:
    """Sector HS norm, or the full-space norm weighted by ``dim H^ell(R^m)``."""
    if not full_space:
        return hs_norm_spectral(sector, t)
    from .cones import harmonic_dim

    tot = 0.0
    for ell in range(ell_max + 1):
        d = harmonic_dim(sector.m, ell)
        if d == 0:
            if sector.m == 1 and ell >= 2:
                break
            continue
        term = d * hs_norm_spectral(SectorModel(sector.a, sector.m, ell), t) ** 2
        tot += term
        if term < 1e-18 * tot:
            break
    return math.sqrt(tot)


# ---------------------------------------------------------------------------
# Finite differences


def fd_apply_Da(sector: SectorModel, r, values) -> np.ndarray:
    """``D_a`` on samples over a uniform grid with 4th-order central stencils.

    The two points at each end are returned as NaN.
    """
    r = np.asarray(r, dtype=float)
    y = np.asarray(values)
    h = r[1] - r[0]
    d1 = np.full_like(y, np.nan)
    d2 = np.full_like(y, np.nan)
    d1[2:-2] = (-y[4:] + 8 * y[3:-1] - 8 * y[1:-3] + y[:-4]) / (12 * h)
    d2[2:-2] = (-y[4:] + 16 * y[3:-1] - 30 * y[2:-2] + 16 * y[1:-3] - y[:-4]) / (12 * h * h)
    a, m, ell = _f(sector.a), sector.m, sector.ell
    lap = d2 + (m - 1) / r * d1 - ell * (ell + m - 2) / r**2 * y
    return (r ** (2 - a) * lap - r**a * y) / (2 * a)


def symmetry_defect(sector: SectorModel, f, g, r) -> float:
    """``|<D f, g> - <f, D g>|`` for test functions supported inside the grid."""
    r = np.asarray(r, dtype=float)
    fv, gv = f(r), g(r)
    wgt = r ** _f(sector.measure_exponent)
    Df = np.nan_to_num(fd_apply_Da(sector, r, fv))
    Dg = np.nan_to_num(fd_apply_Da(sector, r, gv))
    lhs = np.trapezoid(Df * np.conj(gv) * wgt, r)
    rhs = np.trapezoid(fv * np.conj(Dg) * wgt, r)
    return float(abs(lhs - rhs))
