"""Rank-1 Bargmann transform onto the K-Bessel Fock space, and the classical Gaussian transform."""
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import eval_hermite

from minrep import bargmann
from minrep.inversion import rank1_eigenfunction

# 2 pi int rho^(2n+2lam-1) K~_{lam-1}(rho) d rho, mpmath quad at 25 digits
FOCK_MOMENTS = [
    (0.5, 0, 5.5683279968317078),
    (0.5, 2, 133.63987192396099),
    (1.0, 1, 25.132741228718346),
    (1.5, 3, 56128.746208063615),
    (2.5, 0, 66.819935961980494),
]


@pytest.mark.parametrize("lam,n,value", FOCK_MOMENTS)
def test_fock_moments_closed_form_and_quadrature(lam, n, value):
    fock = bargmann.FockSpaceModel(lam)
    assert fock.weights(n + 1)[n] == pytest.approx(value, rel=1e-13)
    assert fock.moment_quadrature(n) == pytest.approx(value, rel=1e-9)


def test_fock_divergence():
    with pytest.raises(bargmann.FockDivergence):
        bargmann.FockSpaceModel(0.0)


@settings(max_examples=30, deadline=None)
@given(n=st.integers(0, 12), lam=st.sampled_from([Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(7, 3)]),
       x=st.fractions(0, 5, max_denominator=9))
def test_taylor_kernel_collapse(n, lam, x):
    # the Laguerre closed form equals the raw double series, computed exactly
    fast = bargmann.taylor_kernel(n + 1, float(lam), float(x))[n] * math.gamma(float(lam))
    exact = bargmann.taylor_kernel_exact(n, lam, x)
    assert float(fast) == pytest.approx(float(exact), rel=1e-11, abs=1e-14)


@pytest.mark.parametrize("lam", [0.5, 1.0, 1.5])
def test_ground_state_maps_to_constant(lam):
    # with c_mu = 2^lam / Gamma(lam), B f_0 = 1 exactly
    op = bargmann.bargmann_operator(lam)
    a = bargmann.bargmann_apply(op, lambda x: rank1_eigenfunction(lam, 0, x), 8)
    assert a[0] == pytest.approx(1.0, rel=1e-12)
    assert np.max(np.abs(a[1:])) < 1e-13


@pytest.mark.parametrize("lam", [0.5, 1.0, 1.5])
def test_monomial_images_and_isometry(lam):
    op = bargmann.bargmann_operator(lam)
    rep = bargmann.cayley_consistency(op, kmax=10, tol=1e-8)
    assert rep["passed"]
    assert max(rep["leakage"]) <= 1e-8
    assert rep["isometry_residual"] <= 1e-6
    assert op.fock.c_F == pytest.approx(op.fock.analytic_c_F(op.model.c_mu), rel=1e-10)
    assert set(op.to_json()) == {"lambda", "c_mu", "c_F", "leakage", "isometry_residual"}


def test_negative_control_wrong_measure_constant():
    op = bargmann.bargmann_operator(1.0)
    op.model.c_mu *= 1.01
    assert bargmann.isometry_residual(op, 5) > 1e-3


def test_truncation_warning():
    op = bargmann.bargmann_operator(1.0)
    with pytest.warns(bargmann.TruncationWarning):
        bargmann.bargmann_apply(op, lambda x: rank1_eigenfunction(1.0, 8, x), 6)


def test_uncalibrated_rejected():
    op = bargmann.bargmann_operator(1.0)
    op.model.c_mu = None
    with pytest.raises(ValueError):
        bargmann.bargmann_apply(op, lambda x: np.exp(-x))


# ---------------------------------------------------------------- classical


def test_classical_constant():
    # ground state e^{-x^2} maps to sqrt(pi/2); ratio^2 = pi^(3/2)/sqrt(2) per dimension
    c1 = math.sqrt(math.pi**1.5 / math.sqrt(2))
    assert bargmann.classical_constant(1) == pytest.approx(c1, rel=1e-13)
    assert bargmann.classical_constant(2) == pytest.approx(c1**2, rel=1e-13)


@pytest.mark.parametrize("n", [0, 1, 4, 7])
def test_classical_basis_maps_to_monomials(n):
    a = bargmann.classical_bargmann(1, lambda x: eval_hermite(n, math.sqrt(2) * x) * np.exp(-x * x), 12)
    ref = np.zeros(12)
    ref[n] = math.sqrt(math.pi / 2) * 2 ** (n / 2)
    assert np.allclose(a, ref, atol=1e-12 * max(1.0, ref[n]))


def test_classical_parseval():
    f = lambda x: (1 + x - x**3) * np.exp(-x * x)  # noqa: E731
    a = bargmann.classical_bargmann(1, f, 20)
    c = bargmann.classical_constant(1)
    assert bargmann.classical_fock_norm(a) == pytest.approx(c * bargmann.classical_l2_norm(1, f), rel=1e-12)
    g = lambda x1, x2: x1 * (1 + x2**2) * np.exp(-x1 * x1 - x2 * x2)  # noqa: E731
    a2 = bargmann.classical_bargmann(2, g, 12)
    assert a2.shape == (12, 12)
    c2 = bargmann.classical_constant(2)
    assert bargmann.classical_fock_norm(a2) == pytest.approx(c2 * bargmann.classical_l2_norm(2, g), rel=1e-12)
    with pytest.raises(ValueError):
        bargmann.classical_bargmann(3, f)
