"""Unitary inversion: spectral phases, rank-1 kernel, folding onto the Fourier transform."""
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate
from scipy.special import j0

from minrep import inversion, spectral
from minrep.sector import SectorModel


def test_fourier_eigenphases_at_a2():
    # Hermite-type functions of degree ell and radial order k are eigenfunctions of the
    # unitary Fourier transform with eigenvalue (-i)^(ell+2k)
    for m in (1, 2, 3, 5):
        for ell in range(4):
            if m == 1 and ell > 1:
                continue
            ph = inversion.eigenphases(SectorModel(2, m, ell), 6)
            assert np.allclose(ph, [(-1j) ** (ell + 2 * k) for k in range(6)], atol=1e-15)
            assert inversion.fourier_multiplier(ell, 3) == pytest.approx(ph[3])


def test_light_cone_phases():
    ph = inversion.eigenphases(SectorModel(1, 3, 0), 4)
    assert np.allclose(ph, [1, -1, 1, -1])


@pytest.mark.parametrize("a,m,ell", [(1, 3, 0), (2, 2, 1), (Fraction(1, 2), 3, 1), (3, 4, 2)])
def test_spectral_inversion_unitary_and_square(a, m, ell):
    sec = SectorModel(a, m, ell)
    rng = np.random.default_rng(7)
    d = rng.normal(size=30) + 1j * rng.normal(size=30)
    f = spectral.LaguerreExpansion.from_normalized(sec, d)
    Ff = inversion.invert_spectral(sec, f)
    assert Ff.norm() == pytest.approx(f.norm(), rel=1e-13)
    FFf = inversion.invert_spectral(sec, Ff)
    assert np.allclose(FFf.coeffs, inversion.sector_phase(sec) ** 2 * f.coeffs, atol=1e-13)


@pytest.mark.parametrize("a,m,ell", [(1, 3, 0), (2, 2, 1), (2, 3, 0)])
def test_sector_kernel_reproduces_phases(a, m, ell):
    sec = SectorModel(a, m, ell)
    r_in, w_in = spectral.measure_rule(sec, 200, beta=0.5)
    y = np.linspace(0.1, 3.0, 9)
    K = inversion.inversion_kernel_values(sec, y, r_in)
    for k in range(4):
        out = (K * w_in) @ spectral.eigenfunction_values(sec, k, r_in)
        ref = inversion.eigenphases(sec, k + 1)[k] * spectral.eigenfunction_values(sec, k, y)
        assert np.max(np.abs(out - ref)) < 1e-6


def test_rank1_lambda_one_is_hankel_of_order_zero():
    # lam = 1: (F f)(y) = int J0(2 sqrt(xy)) f(x) dx; the ground state e^{-x} is fixed
    M = inversion.RankOneModel(1.0).calibrate()
    assert M.c_mu == pytest.approx(2.0, rel=1e-12)
    y = np.array([0.3, 1.0, 2.5])
    f = lambda x: x * np.exp(-x)  # noqa: E731
    ref = [integrate.quad(lambda x: j0(2 * math.sqrt(x * yy)) * f(x), 0, 60, limit=400)[0] for yy in y]
    assert np.allclose(inversion.invert_kernel_rank1(M, f, y), ref, atol=1e-10)


@pytest.mark.parametrize("lam", [0.5, 1.0, 1.5, 2.75])
def test_rank1_calibration_matches_closed_form(lam):
    M = inversion.RankOneModel(lam).calibrate()
    assert M.c_mu == pytest.approx(2**lam / math.gamma(lam), rel=1e-12)
    assert M.residual < 1e-10
    assert set(M.calibration_json()) == {"c_mu", "residual"}


def test_rank1_requires_calibration():
    with pytest.raises(inversion.CalibrationMissing):
        inversion.invert_kernel_rank1(inversion.RankOneModel(1.0), lambda x: np.exp(-x), [1.0])
    with pytest.raises(ValueError):
        inversion.RankOneModel(-1.0)


@settings(max_examples=15, deadline=None)
@given(lam=st.sampled_from([0.5, 1.0, 1.5]), seed=st.integers(0, 2**31))
def test_rank1_norm_preserved(lam, seed):
    M = inversion.RankOneModel(lam).calibrate()
    c = np.random.default_rng(seed).normal(size=12)
    y, _ = M.norm_rule()
    out = inversion.invert_kernel_rank1(M, lambda x: inversion.rank1_synthesize(M, c, x), y)
    exact = math.sqrt(sum(c[k] ** 2 * M.eigen_norm(k) ** 2 for k in range(12)))
    assert M.norm(out) == pytest.approx(exact, rel=1e-8)


def test_rank1_twice_is_identity():
    M = inversion.RankOneModel(1.5).calibrate()
    y = np.linspace(0.05, 6, 15)
    f = lambda x: inversion.rank1_eigenfunction(1.5, 4, x)  # noqa: E731
    assert np.max(np.abs(inversion.invert_twice_rank1(M, f, y) - f(y))) < 1e-8


def test_inversion_operator_json():
    op = inversion.inversion_operator(SectorModel(1, 3, 0))
    js = op.to_json()
    assert set(js) == {"sector", "phase", "backend", "calibration"}
    assert js["phase"] == pytest.approx([-1.0, 0.0], abs=1e-15)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_hankel_transform_of_gaussian(m):
    rho = np.linspace(0.2, 3, 6)
    got = inversion.hankel_transform(m, 0, lambda r: np.exp(-r * r / 2), rho)
    assert np.allclose(got, np.exp(-rho * rho / 2), atol=1e-11)


@pytest.mark.parametrize("m,ell", [(1, 0), (2, 0), (2, 2), (3, 0), (3, 2)])
def test_folding_reproduces_fourier(m, ell):
    rep = inversion.folding_check(m, lambda r: r**ell * (1 + r * r) * np.exp(-r * r / 3), ell)
    assert rep["passed"], rep
    assert rep["sup_error"] <= 1e-8


def test_folding_needs_even_ell():
    with pytest.raises(ValueError):
        inversion.folding_check(3, lambda r: r * np.exp(-r * r), 1)


def test_intertwining_at_a2():
    sec = SectorModel(2, 3, 0)
    f = spectral.analyze(lambda r: np.exp(-r * r / 2) * (1 + r * r), sec, 50)
    assert inversion.intertwining_defect(sec, f) < 1e-9
    with pytest.raises(ValueError):
        inversion.intertwining_defect(SectorModel(1, 3, 0), f)


def test_integrability_probe_is_evidence_only():
    rep = inversion.kernel_local_integrability_probe(SectorModel(2, 2, 0))
    assert rep["conclusive"] is False
    # |J_0(rs)| ~ (rs)^(-1/2) against r dr x s ds: the box integrals keep growing
    assert rep["growth_exponent"] > 1
    rep = inversion.kernel_local_integrability_probe(lam=0.5)
    # K(0, 0) = 2^(-1/2) Gamma(1/2) c_mu / Gamma(1/2) with c_mu = 2^(1/2)/Gamma(1/2)
    assert rep["sup_abs_kernel"] == pytest.approx(1 / math.sqrt(math.pi), rel=1e-9)  # sup over nodes near 0
    with pytest.raises(ValueError):
        inversion.kernel_local_integrability_probe()
