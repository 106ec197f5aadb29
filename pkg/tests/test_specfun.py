"""Special functions against frozen mpmath values (30 digits, rounded to 17)."""
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special as sps

from minrep import specfun

# (kind, nu, t, value): mpmath besselj/besseli/besselk divided by (t/2)**nu
RENORM = [
    ("J", -0.5, 0.3, 0.53899089594775126),
    ("J", 0.0, 1.0, 0.76519768655796655),
    ("J", 0.5, 2.5, 0.2701213997975552),
    ("J", 1.5, 7.0, -0.030399318913912948),
    ("J", 2.0, 15.0, 0.00073905205289334177),
    ("J", 3.25, 40.0, -7.0920451092589107e-6),
    ("J", -0.75, 4.0, -0.1873256582821459),
    ("I", -0.5, 0.3, 0.58976910095279215),
    ("I", 0.0, 1.0, 1.2660658777520083),
    ("I", 0.5, 2.5, 2.7307698772292852),
    ("I", 1.5, 7.0, 21.645820090640976),
    ("I", 2.0, 15.0, 5260.4334880335353),
    ("I", 3.25, 40.0, 770270094505.08549),
    ("I", -0.75, 4.0, 17.497563827763545),
    ("K", -0.5, 0.3, 0.65653305403414162),
    ("K", 0.0, 1.0, 0.42102443824070833),
    ("K", 0.5, 2.5, 0.058196748765001361),
    ("K", 1.5, 7.0, 7.5394458375202023e-5),
    ("K", 2.0, 15.0, 1.9860919226722454e-9),
    ("K", 3.25, 40.0, 5.6516547181689799e-23),
    ("K", -0.75, 4.0, 0.019991598130999581),
]

# I~_nu(z) at complex z, mpmath
ITILDE_COMPLEX = [
    (0.5, 1 + 2j, 0.52293203369305873 + 0.53738646396646046j),
    (1.0, 3 - 4j, -1.2263193326267377 - 0.61441529116645238j),
    (-0.5, 0.5 + 10j, -0.53381296351871294 - 0.15994032613549596j),
    (2.0, 12 + 5j, -221.87820023490753 - 298.11589071495281j),
]


@pytest.mark.parametrize("kind,nu,t,value", RENORM)
def test_bessel_renorm_matches_mpmath(kind, nu, t, value):
    got = float(specfun.bessel_renorm(kind, nu, t))
    assert got == pytest.approx(value, rel=1e-12, abs=1e-15)


@pytest.mark.parametrize("nu,z,value", ITILDE_COMPLEX)
def test_itilde_complex_matches_mpmath(nu, z, value):
    S, shift = specfun.itilde_complex_scaled(nu, np.array([z * z]))
    got = complex(S[0] * np.exp(shift[0]))
    assert abs(got - value) <= 1e-12 * abs(value)


@pytest.mark.parametrize("kind", ["J", "I"])
@pytest.mark.parametrize("nu", [-0.5, 0.0, 1.5, 4.0])
def test_value_at_origin(kind, nu):
    assert float(specfun.bessel_renorm(kind, nu, 0.0)) == pytest.approx(1 / math.gamma(nu + 1), rel=1e-15)


def test_series_and_amos_agree_at_the_switch():
    t = np.linspace(8, 16, 30)
    for nu in (-0.5, 0.5, 2.0):
        series = specfun.tilde_series("J", nu, t, maxterms=2000)
        amos = sps.jv(nu, t) / (t / 2) ** nu
        assert np.max(np.abs(series - amos)) < 1e-10


def test_errors():
    with pytest.raises(specfun.PoleError):
        specfun.gamma(-2)
    with pytest.raises(specfun.DomainError):
        specfun.bessel_renorm("J", 0.5, -1.0)
    with pytest.raises(ValueError):
        specfun.bessel_renorm("Y", 0.5, 1.0)
    with pytest.raises(ValueError):
        specfun.laguerre(-1, 0, 1.0)


def test_gamma_matches_math():
    for x in (0.5, 1.0, 3.7, -0.5, -2.5, 170.0):
        assert specfun.gamma(x) == math.gamma(x)


@settings(max_examples=60, deadline=None)
@given(nu=st.floats(-0.9, 5.0), t=st.floats(0.01, 30.0))
def test_j_recurrence(nu, t):
    # J~_{nu-1}(t) + (t^2/4) J~_{nu+1}(t) = nu J~_nu(t)
    lhs = specfun.bessel_renorm("J", nu - 1, t) + 0.25 * t * t * specfun.bessel_renorm("J", nu + 1, t)
    rhs = nu * specfun.bessel_renorm("J", nu, t)
    scale = abs(specfun.bessel_renorm("J", nu - 1, t)) + 0.25 * t * t * abs(specfun.bessel_renorm("J", nu + 1, t))
    assert abs(lhs - rhs) <= 1e-11 * max(scale, 1e-300)


@settings(max_examples=60, deadline=None)
@given(nu=st.floats(-0.9, 5.0), t=st.floats(0.0, 6.0))
def test_itilde_complex_on_real_axis(nu, t):
    S, shift = specfun.itilde_complex_scaled(nu, np.array([t * t + 0j]))
    assert complex(S[0] * np.exp(shift[0])).real == pytest.approx(float(specfun.bessel_renorm("I", nu, t)), rel=1e-12)


def test_laguerre_float_and_exact():
    x = np.linspace(0, 20, 41)
    for k in (0, 1, 5, 17):
        for a in (-0.5, 0.0, 2.25):
            assert np.allclose(specfun.laguerre(k, a, x), sps.eval_genlaguerre(k, a, x), rtol=1e-12, atol=1e-12)
    # L_3^(1/2)(2) exactly
    exact = specfun.laguerre(3, Fraction(1, 2), 2)
    coeffs = specfun.laguerre_coeffs(3, Fraction(1, 2))
    assert isinstance(exact, Fraction)
    assert exact == sum(c * 2**j for j, c in enumerate(coeffs)) == Fraction(-43, 48)  # sympy assoc_laguerre


def test_hermite_exact_and_float():
    assert specfun.hermite_coeffs(4) == [12, 0, -48, 0, 16]
    assert specfun.hermite(3, Fraction(1, 2)) == Fraction(-5)
    x = np.linspace(-3, 3, 13)
    assert np.allclose(specfun.hermite(7, x), sps.eval_hermite(7, x), rtol=1e-13)
