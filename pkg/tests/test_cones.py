"""Exact cone intersection with certificates; scipy linprog as an independent float oracle."""
import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from minrep import acceptance, cones

R = cones.RationalCone


def lp_nontrivial(c1, c2):
    """Common nonzero point iff some coordinate of G lam = H mu can be scaled to +-1."""
    G = np.array([[float(v) for v in g] for g in c1.generators]).T.reshape(c1.dim, -1)
    H = np.array([[float(v) for v in h] for h in c2.generators]).T.reshape(c2.dim, -1)
    if G.shape[1] == 0 or H.shape[1] == 0:
        return False
    for i in range(c1.dim):
        for s in (1, -1):
            A = np.vstack([np.hstack([G, -H]), np.hstack([np.zeros(G.shape[1]), s * H[i]])])
            b = np.zeros(c1.dim + 1)
            b[-1] = 1
            res = linprog(np.zeros(A.shape[1]), A_eq=A, b_eq=b, bounds=(0, None), method="highs")
            if res.status == 0:
                return True
    return False


def test_spec_example():
    trivial, cert = cones.intersect_trivially(R(2, ((1, 0), (1, 1))), R.ray((1, 0)))
    assert not trivial
    assert cones.certificate_to_json(cert)["point"] == ["1", "0"]


@pytest.mark.parametrize("name,c1,c2,expected", acceptance.cone_suite(), ids=lambda v: v if isinstance(v, str) else "")
def test_suite_verdicts_and_certificates(name, c1, c2, expected):
    trivial, cert = cones.intersect_trivially(c1, c2)
    assert trivial == expected
    assert cones.verify_certificate(c1, c2, trivial, cert)
    assert lp_nontrivial(c1, c2) == (not expected)


def test_tampered_certificates_rejected():
    c1, c2 = R(2, ((1, 0), (1, 1))), R.ray((0, 1))
    trivial, cert = cones.intersect_trivially(c1, c2)
    assert cert["type"] == "separator"
    assert not cones.verify_certificate(c1, c2, not trivial, cert)
    bad = dict(cert, functional=[Fraction(0), Fraction(0)])
    assert not cones.verify_certificate(c1, c2, trivial, bad)
    c3 = R.ray((2, 1))
    _, w = cones.intersect_trivially(c1, c3)
    assert not cones.verify_certificate(c1, c3, False, dict(w, point=[1, 1]))


def test_exhaustive_certificate_for_lines():
    c1, c2 = R(2, ((1, 0), (-1, 0))), R(2, ((0, 1), (0, -1)))
    trivial, cert = cones.intersect_trivially(c1, c2)
    assert trivial and cert["type"] == "exhaustive" and len(cert["proofs"]) == 4
    assert cones.verify_certificate(c1, c2, trivial, cert)
    cert["proofs"] = cert["proofs"][:3]
    assert not cones.verify_certificate(c1, c2, trivial, cert)


def test_farkas_alternative():
    ok, y = cones.feasible([[1, 1]], [-1])
    assert not ok and cones._check_farkas([[Fraction(1), Fraction(1)]], [Fraction(-1)], y)
    ok, z = cones.feasible([[1, 2], [0, 1]], [3, 1])
    assert ok and z == [1, 1]


def test_dimension_and_zero_generator():
    with pytest.raises(cones.DimensionMismatch):
        cones.intersect_trivially(R.ray((1, 0)), R.ray((1, 0, 0)))
    with pytest.raises(ValueError):
        R(2, ((0, 0),))


def test_file_roundtrip(tmp_path):
    c = R(3, ((1, "1/2", 0), (0, 0, -3)))
    cones.save_cone(c, tmp_path / "c.json")
    assert cones.load_cone(tmp_path / "c.json") == c
    assert json.loads((tmp_path / "c.json").read_text())["generators"][0] == ["1", "1/2", "0"]
    assert cones.parse_vector("1/2, -3") == (Fraction(1, 2), Fraction(-3))


def test_bundled_examples():
    ex = cones.bundled_examples()
    assert len(ex) == 2
    for e in ex:
        t, _ = cones.intersect_trivially(R.from_json(e["cone"]), R.ray(e["beta"]))
        assert t == e["expected_trivial"]


vec = st.lists(st.integers(-3, 3), min_size=2, max_size=2).filter(any)


@settings(max_examples=80, deadline=None)
@given(g=st.lists(vec, min_size=1, max_size=3), h=st.lists(vec, min_size=1, max_size=3))
def test_random_cones_against_linprog(g, h):
    c1, c2 = R(2, tuple(map(tuple, g))), R(2, tuple(map(tuple, h)))
    t, cert = cones.intersect_trivially(c1, c2)
    ts, _ = cones.intersect_trivially(c2, c1)
    assert t == ts
    assert cones.verify_certificate(c1, c2, t, cert)
    assert t == (not lp_nontrivial(c1, c2))


vec3 = st.lists(st.integers(-2, 2), min_size=3, max_size=3).filter(any)


@settings(max_examples=50, deadline=None)
@given(g=st.lists(vec3, min_size=1, max_size=4), h=st.lists(vec3, min_size=1, max_size=3))
def test_random_3d_cones_against_linprog(g, h):
    c1, c2 = R(3, tuple(map(tuple, g))), R(3, tuple(map(tuple, h)))
    t, cert = cones.intersect_trivially(c1, c2)
    assert cones.verify_certificate(c1, c2, t, cert)
    assert t == (not lp_nontrivial(c1, c2))


def test_harmonic_dimensions():
    assert [cones.harmonic_dim(3, j) for j in range(5)] == [1, 3, 5, 7, 9]
    assert [cones.harmonic_dim(2, j) for j in range(4)] == [1, 2, 2, 2]
    assert [cones.harmonic_dim(1, j) for j in range(4)] == [1, 1, 0, 0]
    grid = [(m, j) for m in range(1, 6) for j in range(9)] + [(6, 5)]
    for m, j in grid:
        assert cones.harmonic_dim(m, j) == cones.harmonic_dim(m, j, method="bruteforce")
    with pytest.raises(ValueError):
        cones.harmonic_dim(0, 1)
