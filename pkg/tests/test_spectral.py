"""Laguerre eigenbases, node tables, semigroup kernels, HS norms."""
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate
from scipy.special import eval_hermite, gammaln, roots_genlaguerre

from minrep import spectral
from minrep.sector import SectorModel

GRID = np.linspace(0.05, 4.0, 20)


def hermite_function(n, x):
    """Orthonormal Hermite function on the line (scipy polynomials, log-scaled norm)."""
    return eval_hermite(n, x) * np.exp(-x * x / 2 - 0.5 * (n * math.log(2) + gammaln(n + 1)) - 0.25 * math.log(math.pi))


# ---------------------------------------------------------------- quadrature


@pytest.mark.parametrize("alpha", [-0.5, 0.0, 1.0, 3.5])
def test_laguerre_rule_matches_scipy(alpha):
    x, _ = spectral.laguerre_rule(40, alpha)
    xs, _ = roots_genlaguerre(40, alpha)
    assert np.allclose(x, xs, rtol=1e-12)


@pytest.mark.parametrize("alpha,beta,p", [(-0.5, 2.0, 3), (1.5, 1.0, 10), (0.0, 0.7, 25)])
def test_scaled_rule_exactness(alpha, beta, p):
    x, w = spectral.scaled_rule(60, alpha, beta)
    got = np.sum(w * x**p * np.exp(-beta * x))
    exact = math.exp(gammaln(alpha + p + 1) - (alpha + p + 1) * math.log(beta))
    assert got == pytest.approx(exact, rel=1e-12)


def test_node_table_roundtrip_and_name(tmp_path):
    sec = SectorModel(Fraction(1, 2), 3, 1)
    x, w = spectral.laguerre_rule(30, float(sec.nu))
    path = spectral.node_table_path(sec, 30, tmp_path)
    assert path.name == "nodes_a0.5_m3_l1_N30.bin"
    spectral.write_node_table(path, sec, x, w)
    a, m, ell, x2, w2 = spectral.read_node_table(path)
    assert (a, m, ell) == (0.5, 3, 1)
    assert np.array_equal(x, x2) and np.array_equal(w, w2)
    # header (f64, u32, u32, u32) + 30 pairs of f64
    assert path.stat().st_size == 8 + 3 * 4 + 30 * 16


def test_sector_rule_uses_and_repairs_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("MINREP_CACHE", str(tmp_path))
    sec = SectorModel(1, 3, 0)
    x, w = spectral.sector_rule(sec, 25)
    path = spectral.node_table_path(sec, 25)
    assert path.exists()
    x2, w2 = spectral.sector_rule(sec, 25)
    assert np.array_equal(x, x2)
    path.write_bytes(b"garbage")
    x3, _ = spectral.sector_rule(sec, 25)
    assert np.array_equal(x, x3)


# ---------------------------------------------------------------- spectra


def test_spectrum_examples():
    assert spectral.merged_spectrum(1, 3, 3) == [-1, -2, -3]
    assert spectral.spectrum(SectorModel(1, 3, 0), 2) == [-1, -2]
    assert spectral.merged_spectrum(2, 1, 3) == [Fraction(-1, 4), Fraction(-3, 4), Fraction(-5, 4)]
    assert spectral.lowest_weight(SectorModel(1, 3, 0)) == 2
    assert spectral.lowest_weight(SectorModel(2, 3, 1)) == Fraction(5, 2)


def test_nonintegrable_measure_rejected():
    with pytest.raises(ValueError, match="not locally integrable"):
        SectorModel(1, 1, 0)
    with pytest.raises(ValueError):
        spectral.merged_spectrum(1, 1, 3)


@settings(max_examples=40, deadline=None)
@given(p=st.integers(1, 8), q=st.integers(1, 4), m=st.integers(2, 6), ell=st.integers(0, 5))
def test_lowest_weight_formula(p, q, m, ell):
    sec = SectorModel(Fraction(p, q), m, ell)
    assert spectral.lowest_weight(sec) == sec.nu + 1
    assert spectral.spectrum(sec, 1)[0] == -(sec.nu + 1) / 2


# ---------------------------------------------------------------- expansions


@pytest.mark.parametrize("a,m,ell", [(1, 3, 0), (2, 2, 1), (Fraction(1, 2), 3, 2)])
def test_analyze_recovers_eigenfunction(a, m, ell):
    sec = SectorModel(a, m, ell)
    exp = spectral.analyze(lambda r: spectral.eigenfunction_values(sec, 3, r), sec, n=20)
    e = np.zeros(20)
    e[3] = 1
    assert np.allclose(exp.coeffs, e, atol=1e-11)
    assert np.allclose(spectral.synthesize(exp, GRID), spectral.eigenfunction_values(sec, 3, GRID), atol=1e-11)


def test_eigenfunction_norms_match_hk():
    sec = SectorModel(1, 3, 1)
    for k in (0, 2, 5):
        val, _ = integrate.quad(lambda r: spectral.eigenfunction_values(sec, k, [r])[0] ** 2 * r, 0, np.inf)
        assert val == pytest.approx(math.exp(spectral.log_norms(sec, k + 1)[k]), rel=1e-10)


def test_analyze_rejects_unresolved_function():
    sec = SectorModel(1, 3, 0)
    with pytest.raises(spectral.QuadratureError):
        spectral.analyze(lambda r: 1 / (1 + r**2), sec)
    with pytest.raises(spectral.QuadratureError):
        spectral.analyze(lambda r: np.full_like(r, np.nan), sec)


def test_semigroup_apply_is_diagonal():
    sec = SectorModel(2, 2, 1)
    f = spectral.LaguerreExpansion.from_normalized(sec, np.array([1.0, 2.0, 0.5]))
    g = spectral.semigroup_apply(0.7, f)
    lam = spectral.eigenvalues(sec, 3)
    assert np.allclose(g.coeffs, f.coeffs * np.exp(0.7 * lam))


# ---------------------------------------------------------------- kernels


@pytest.mark.parametrize("a,m,ell", [(1, 3, 0), (2, 2, 1)])
@pytest.mark.parametrize("t", [0.5, 1.0, 1 + 1j])
def test_kernel_matches_spectral_sum(a, m, ell, t):
    sec = SectorModel(a, m, ell)
    K = spectral.kernel_values(sec, t, GRID, GRID)
    S = spectral.spectral_kernel_values(sec, t, GRID, GRID)
    assert np.max(np.abs(K - S)) <= 1e-8


@pytest.mark.parametrize("parity", [0, 1])
@pytest.mark.parametrize("t", [0.5, 1 + 1j])
def test_mehler_matches_hermite_sum(parity, t):
    # e^{tD_2} on R = e^{-(t/2) H}; folding keeps even (odd) Hermite functions twice
    ref = sum(2 * np.exp(-t / 2 * (n + 0.5)) * np.outer(hermite_function(n, GRID), hermite_function(n, GRID))
              for n in range(parity, 120, 2))
    assert np.max(np.abs(spectral.mehler_sector_kernel(t, GRID, GRID, parity) - ref)) <= 1e-10
    sec = SectorModel(2, 1, parity)
    assert np.max(np.abs(spectral.kernel_values(sec, t, GRID, GRID) - ref)) <= 1e-10


def test_kernel_calibration_is_one():
    op = spectral.semigroup_kernel(SectorModel(1, 3, 0), 1.0)
    assert op.meta["calibration"] == pytest.approx(1.0, abs=1e-12)


def test_singular_parameter():
    with pytest.raises(spectral.SingularParameter):
        spectral.kernel_values(SectorModel(1, 3, 0), 2j * math.pi, GRID, GRID)


def test_hs_norm_geometric_series():
    # a=1, m=3, l=0, t=1: sum_k e^{-2(k+1)}
    expected = math.sqrt(math.exp(-2) / (1 - math.exp(-2)))
    sec = SectorModel(1, 3, 0)
    assert spectral.hs_norm_spectral(sec, 1.0) == pytest.approx(expected, rel=1e-14)
    assert spectral.hs_norm_kernel(sec, 1.0) == pytest.approx(expected, rel=1e-8)
    with pytest.raises(spectral.NotHilbertSchmidt):
        spectral.hs_norm_spectral(sec, 1j)


def test_full_space_hs_norm_exceeds_sector():
    sec = SectorModel(2, 3, 0)
    assert spectral.hs_norm(sec, 1.0, full_space=True) > spectral.hs_norm(sec, 1.0)


def test_boundary_limit_is_unitary_multiplier():
    sec = SectorModel(1, 3, 0)
    op = spectral.semigroup_kernel(sec, 0.5j)
    out = op.apply(lambda s: spectral.eigenfunction_values(sec, 1, s), GRID)
    ref = np.exp(0.5j * -2) * spectral.eigenfunction_values(sec, 1, GRID)
    assert np.max(np.abs(out - ref)) <= 1e-4


def test_fd_symmetry():
    sec = SectorModel(1, 3, 0)
    r = np.linspace(0.5, 12, 4001)
    bump = lambda c: (lambda x: np.exp(-4 * (x - c) ** 2))  # noqa: E731
    assert spectral.symmetry_defect(sec, bump(3.0), bump(3.5), r) < 1e-8
