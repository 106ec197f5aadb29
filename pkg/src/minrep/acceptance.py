"""Acceptance suite: nine numbered criteria shared by the tests and ``minrep verify``.

Each ``criterion_N`` returns a :class:`CriterionResult` holding the verdict,
the measured quantities next to their tolerances, and the wall time.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import bargmann, cones, fourth_order, inversion, radial_symbolic, spectral
from .sector import SectorModel


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    details: dict = field(default_factory=dict)
    seconds: float = 0.0
    limit: float | None = None

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        lim = f" (limit {self.limit:g}s)" if self.limit else ""
        return f"[{verdict}] criterion {self.number}: {self.title} in {self.seconds:.2f}s{lim}"

    def to_json(self) -> dict:
        return {"criterion": self.number, "title": self.title, "passed": self.passed,
                "seconds": self.seconds, "limit": self.limit, "details": _jsonable(self.details)}


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, np.bool_):
        return bool(v)
    if isinstance(v, complex):
        return [v.real, v.imag]
    return v


def _timed(number, title, limit, fn):
    t0 = time.perf_counter()
    passed, details = fn()
    dt = time.perf_counter() - t0
    if limit is not None and dt > limit:
        details["runtime_exceeded"] = True
        passed = False
    return CriterionResult(number, title, bool(passed), details, dt, limit)


# ---------------------------------------------------------------------------


A_GRID = (Fraction(1, 2), 1, 2, 3)


def criterion_1() -> CriterionResult:
    def run():
        failures = []
        checked = 0
        for a in A_GRID:
            for m in range(1, 5):
                triple = radial_symbolic.deformed_triple(a, m)
                for ell in range(4):
                    rep = radial_symbolic.commutator_check(
                        triple, radial_symbolic.lattice_test_set(a, m, ell))
                    checked += 1
                    if not rep.passed:
                        failures.append({"a": str(a), "m": m, "ell": ell})
        return not failures, {"configurations": checked, "failures": failures, "tolerance": "exact zero"}

    return _timed(1, "exact sl2 relations on the lattice test set", 5.0, run)


def criterion_2() -> CriterionResult:
    def run():
        bad, excluded = [], []
        for a, m in [(1, m) for m in range(1, 5)] + [(2, m) for m in range(1, 5)]:
            if a == 1:
                expected = [-(j + Fraction(m - 1, 2)) for j in range(10)]
            else:
                expected = [-Fraction(1, 2) * (j + Fraction(m, 2)) for j in range(10)]
            try:
                got = spectral.merged_spectrum(a, m, 10)
            except ValueError as exc:
                excluded.append({"a": a, "m": m, "reason": str(exc)})
                continue
            if got != expected:
                bad.append({"a": a, "m": m, "got": got, "expected": expected})
        # only (a, m) = (1, 1) may be excluded: its measure r^-1 dr is not locally integrable
        ok = not bad and [(e["a"], e["m"]) for e in excluded] == [(1, 1)]
        return ok, {"mismatches": bad, "excluded": excluded, "values": 10}

    return _timed(2, "merged spectra equal the closed-form sets", 1.0, run)


def criterion_3() -> CriterionResult:
    def run():
        bad = []
        for ell in range(11):
            for m in range(2, 6):
                lw1 = spectral.lowest_weight(SectorModel(1, m, ell))
                lw2 = spectral.lowest_weight(SectorModel(2, m, ell))
                if lw1 != 2 * ell + m - 1:
                    bad.append({"a": 1, "m": m, "ell": ell, "got": lw1})
                if lw2 != ell + Fraction(m, 2):
                    bad.append({"a": 2, "m": m, "ell": ell, "got": lw2})
        return not bad, {"mismatches": bad, "ell_max": 10}

    return _timed(3, "lowest weights match both printed special cases", None, run)


CRIT4_SECTORS = ((1, 3, 0), (2, 2, 1))
CRIT4_TIMES = (0.5, 1.0, 1 + 1j)


def criterion_4() -> CriterionResult:
    def run():
        grid = np.linspace(0.05, 4.0, 20)
        rows = []
        ok = True
        for a, m, ell in CRIT4_SECTORS:
            sec = SectorModel(a, m, ell)
            for t in CRIT4_TIMES:
                K = spectral.kernel_values(sec, t, grid, grid)
                S = spectral.spectral_kernel_values(sec, t, grid, grid, n=60)
                kern_err = float(np.max(np.abs(K - S)))
                op = spectral.semigroup_kernel(sec, t)
                app_err = 0.0
                for k in range(6):
                    out = op.apply(lambda s: spectral.eigenfunction_values(sec, k, s), grid)
                    ref = np.exp(t * spectral.eigenvalues(sec, k + 1)[k]) * spectral.eigenfunction_values(sec, k, grid)
                    app_err = max(app_err, float(np.max(np.abs(out - ref))))
                hs_k = spectral.hs_norm_kernel(sec, t)
                hs_s = spectral.hs_norm_spectral(sec, t)
                hs_err = abs(hs_k - hs_s)
                ok &= kern_err <= 1e-8 and app_err <= 1e-8 and hs_err <= 1e-4
                rows.append({"sector": [a, m, ell], "t": complex(t), "kernel_sup_error": kern_err,
                             "apply_sup_error": app_err, "hs_kernel": hs_k, "hs_series": hs_s,
                             "hs_error": hs_err, "calibration": op.meta["calibration"]})
        return ok, {"rows": rows, "tolerances": {"kernel": 1e-8, "hs": 1e-4}}

    return _timed(4, "semigroup kernel equals spectral backend; HS norms agree", 30.0, run)


def criterion_5() -> CriterionResult:
    def run():
        rng = np.random.default_rng(20240501)
        det = {}
        # spectral backend, several sectors
        worst = 0.0
        for a, m, ell in ((Fraction(1, 2), 3, 1), (1, 3, 0), (2, 2, 1), (3, 4, 2)):
            sec = SectorModel(a, m, ell)
            for _ in range(50):
                d = rng.normal(size=40) + 1j * rng.normal(size=40)
                f = spectral.LaguerreExpansion.from_normalized(sec, d)
                worst = max(worst, abs(inversion.invert_spectral(sec, f).norm() / f.norm() - 1))
        det["spectral_norm_error"] = worst
        ok = worst <= 1e-12
        # rank-1 kernel backend
        det["rank1"] = []
        yy = np.linspace(0.01, 8.0, 25)
        for lam in (0.5, 1.0, 1.5):
            M = inversion.RankOneModel(lam).calibrate()
            y, _ = M.norm_rule()
            norm_err = 0.0
            for _ in range(50):
                c = rng.normal(size=20) + 1j * rng.normal(size=20)
                out = inversion.invert_kernel_rank1(M, lambda x: inversion.rank1_synthesize(M, c, x), y)
                exact = math.sqrt(sum(abs(c[k]) ** 2 * M.eigen_norm(k) ** 2 for k in range(20)))
                norm_err = max(norm_err, abs(M.norm(out) / exact - 1))
            eq_err = sq_err = 0.0
            for k in range(20):
                fk = lambda x, k=k: inversion.rank1_eigenfunction(lam, k, x)  # noqa: E731
                out = inversion.invert_kernel_rank1(M, fk, yy)
                spec = inversion.rank1_synthesize(M, inversion.invert_spectral_rank1(M, np.eye(20)[k]), yy)
                eq_err = max(eq_err, float(np.max(np.abs(out - spec))))
                twice = inversion.invert_twice_rank1(M, fk, yy)
                sq_err = max(sq_err, float(np.max(np.abs(twice - fk(yy)))))
            ok &= norm_err <= 1e-6 and eq_err <= 1e-6 and sq_err <= 1e-6
            det["rank1"].append({"lambda": lam, "c_mu": M.c_mu, "calibration_residual": M.residual,
                                 "norm_error": norm_err, "backend_error": eq_err, "square_error": sq_err})
        # folding: a = 2 spectral inversion vs Hankel quadrature
        profiles = {
            "gauss": lambda r: np.exp(-r**2 / 2),
            "r2gauss": lambda r: r**2 * np.exp(-r**2 / 2),
            "mixed": lambda r: (1 + r**2) * np.exp(-r**2 / 3),
        }
        det["folding"] = []
        for m in (1, 2, 3):
            for ell in (0, 2):
                if m == 1 and ell == 2:
                    continue
                for name, prof in profiles.items():
                    # smooth functions in the ell sector have profile r**ell * (even in r)
                    phi = (lambda r, prof=prof, ell=ell: r**ell * prof(r))
                    rep = inversion.folding_check(m, phi, ell)
                    ok &= rep["passed"]
                    det["folding"].append({"m": m, "ell": ell, "f": name, "sup_error": rep["sup_error"]})
        return ok, det

    return _timed(5, "unitary inversion: spectral, rank-1 kernel and folding", 60.0, run)


def criterion_6() -> CriterionResult:
    def run():
        grid = np.linspace(0.05, 3.0, 20)
        det = {"mehler": [], "j_limit": []}
        ok = True
        for ell in (0, 1):
            sec = SectorModel(2, 1, ell)
            for t in (0.5, 1.0, 1 + 1j):
                cal = spectral.semigroup_kernel(sec, t).meta["calibration"]
                K = spectral.kernel_values(sec, t, grid, grid)
                M = cal * spectral.mehler_sector_kernel(t, grid, grid, parity=ell)
                err = float(np.max(np.abs(K - M)))
                ok &= err <= 1e-8
                det["mehler"].append({"ell": ell, "t": complex(t), "calibration": cal, "sup_error": err})
        for a, m, ell in ((1, 3, 0), (2, 2, 1), (2, 1, 0)):
            sec = SectorModel(a, m, ell)
            lim = inversion.ground_phase(sec) * spectral.boundary_kernel_values(sec, math.pi, grid, grid)
            ref = inversion.inversion_kernel_values(sec, grid, grid)
            err = float(np.max(np.abs(lim - ref)))
            ok &= err <= 1e-5
            det["j_limit"].append({"sector": [a, m, ell], "sup_error": err})
        return ok, det

    return _timed(6, "Mehler kernel and the J-Bessel limit at t = i pi", None, run)


def criterion_7() -> CriterionResult:
    def run():
        det = []
        ok = True
        for lam in (0.5, 1.0, 1.5):
            op = bargmann.bargmann_operator(lam)
            rep = bargmann.cayley_consistency(op, kmax=10, tol=1e-8)
            fock = op.fock
            mom = max(abs(fock.moment_quadrature(n) / fock.weights(n + 1)[n] - 1) for n in range(11))
            ok &= max(rep["leakage"]) <= 1e-8 and rep["isometry_residual"] <= 1e-6 and mom <= 1e-8
            det.append({"lambda": lam, "c_mu": op.model.c_mu, "c_F": fock.c_F,
                        "max_leakage": max(rep["leakage"]), "isometry_residual": rep["isometry_residual"],
                        "moment_error": mom})
        return ok, {"rows": det}

    return _timed(7, "Bargmann monomial images, isometry and Fock moments", None, run)


def criterion_8() -> CriterionResult:
    def run():
        det = {}
        ok = True
        frob = []
        for b in ((Fraction(1, 3), Fraction(-1, 5), Fraction(2, 7), Fraction(5, 11)),
                  (Fraction(1, 2), Fraction(1, 3), Fraction(1, 4), Fraction(1, 5)),
                  (Fraction(-2, 3), Fraction(3, 7), Fraction(7, 5), Fraction(11, 13))):
            prm = fourth_order.MeijerParams(b)
            u = fourth_order.frobenius_solution(prm, 40)
            res = fourth_order.meijer_residual(prm, u)
            exact = all(isinstance(c, Fraction) for c in res.coeffs + u.coeffs)
            frob.append({"b": [str(x) for x in b], "N": res.N, "zero": res.is_zero(), "exact": exact})
            ok &= res.is_zero() and res.N == 40 and exact
        det["frobenius"] = frob
        scan = fourth_order.parameter_scan(maxdeg=5)
        lag = {(e["mu"], e["nu"]) for e in scan["laguerre"]}
        her = {(e["mu"], e["nu"]) for e in scan["hermite"]}
        nu_minus_one = {(str(Fraction(n, 2)), "-1") for n in range(-3, 5)}
        det["laguerre_families"] = sorted(lag)
        det["hermite_families"] = sorted(her)
        ok &= nu_minus_one <= lag and ("-1/2", "-1") in her
        prm = fourth_order.FourthOrderParams(Fraction(1, 3), -1)
        polys = fourth_order.polynomial_eigenfunctions(prm, "exp(-x)", 8)
        probe = fourth_order.second_order_reduction_probe([(p, p.eigenvalue) for p in polys])
        probe.pop("_operator", None)
        det["reduction"] = probe
        ok &= probe["found"]
        return ok, det

    return _timed(8, "fourth-order operator: exact series, scan, reduction", None, run)


def cone_suite() -> list[tuple]:
    """``(name, c1, c2, expected_trivial)`` cases, including shared rays and lines."""
    R = cones.RationalCone
    C = R(2, ((1, 0), (1, 1)))
    cases = [
        ("beta outside", C, R.ray((0, 1)), True),
        ("beta is a generator", C, R.ray((1, 0)), False),
        ("beta interior", C, R.ray((2, 1)), False),
        ("beta on the other edge", C, R.ray((3, 3)), False),
        ("opposite ray", C, R.ray((-1, 0)), True),
        ("shared ray of two cones", R(2, ((1, 0), (1, 1))), R(2, ((1, 1), (0, 1))), False),
        ("disjoint 2-d cones", R(2, ((1, 0), (2, 1))), R(2, ((0, 1), (-1, 1))), True),
        ("3-d shared edge", R(3, ((1, 0, 0), (0, 1, 0), (0, 0, 1))), R(3, ((1, 1, 0), (-1, 0, 0))), False),
        ("3-d separated", R(3, ((1, 0, 0), (0, 1, 0), (0, 0, 1))), R.ray(("-1/2", 1, -1)), True),
        ("two crossing lines", R(2, ((1, 0), (-1, 0))), R(2, ((0, 1), (0, -1))), True),
        ("line meets half-plane", R(2, ((1, 1), (-1, -1), (0, 1))), R(2, ((1, 0), (-1, 0))), False),
        ("zero cone", R(2, ()), R.ray((2, 0)), True),
    ]
    for ex in cones.bundled_examples():
        cases.append((ex["name"], R.from_json(ex["cone"]), R.ray(ex["beta"]), ex["expected_trivial"]))
    return cases


def criterion_9() -> CriterionResult:
    def run():
        det = []
        ok = True
        for name, c1, c2, expected in cone_suite():
            t, cert = cones.intersect_trivially(c1, c2)
            ts, certs = cones.intersect_trivially(c2, c1)
            good = (t == expected and ts == expected and cones.verify_certificate(c1, c2, t, cert)
                    and cones.verify_certificate(c2, c1, ts, certs))
            ok &= good
            det.append({"case": name, "trivial": t, "expected": expected, "certificate": cert["type"],
                        "verified": good})
        return ok, {"cases": det, "count": len(det)}

    return _timed(9, "cone criterion with verified certificates", 1.0, run)


CRITERIA = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
            6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9}


def run_all(selected=None) -> list[CriterionResult]:
    return [CRITERIA[n]() for n in (selected or sorted(CRITERIA))]
