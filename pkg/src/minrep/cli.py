"""Command line: ``minrep <subcommand> [options]``.

Exit codes: 0 success, 1 validation or usage error, 2 numerical acceptance
failure.  JSON output carries ``"schema": "1"``; CSV output has one row per
``(index, value-real, value-imag)`` taken from the result's ``values``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

import numpy as np

SCHEMA = "1"
EXIT_OK, EXIT_INVALID, EXIT_ACCEPTANCE = 0, 1, 2


class ValidationError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors are validation errors, not acceptance failures
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _number(x):
    """Fractions become ints when integral, floats otherwise."""
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else float(x)
    return x


def _complex_arg(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def _fraction_arg(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _sector(args):
    from .sector import SectorModel
    return SectorModel(args.a, args.m, args.ell)


# ---------------------------------------------------------------------------
# subcommands; each returns (payload, exit_code)


def cmd_spectrum(args):
    from . import spectral
    if args.ell is None:
        vals = spectral.merged_spectrum(args.a, args.m, args.count, args.ell_max)
    else:
        vals = spectral.spectrum(_sector(args), args.count)
    return {"eigenvalues": [_number(v) for v in vals], "exact": [str(v) for v in vals],
            "values": [float(v) for v in vals]}, EXIT_OK


def cmd_commutators(args):
    from . import radial_symbolic as rs
    triple = rs.deformed_triple(args.a, args.m)
    reports = []
    for ell in range(args.ell_max + 1):
        rep = rs.commutator_check(triple, rs.lattice_test_set(args.a, args.m, ell))
        reports.append({"ell": ell, "verdict": "PASS" if rep.passed else "FAIL",
                        "failures": rep.failures()})
    ok = all(r["verdict"] == "PASS" for r in reports)
    return {"triple": triple.label, "verdict": "PASS" if ok else "FAIL", "sectors": reports}, \
        EXIT_OK if ok else EXIT_ACCEPTANCE


def cmd_transform(args):
    from . import inversion, spectral
    if args.lam is not None:
        model = inversion.RankOneModel(args.lam).calibrate()
        d = np.eye(args.count)[0] if args.coeffs is None else _coeff_vector(args.coeffs)
        coeffs = np.asarray(inversion.invert_spectral_rank1(model, d), dtype=complex)
        payload = {"sector": model.as_dict(), "phase": [1.0, 0.0], "backend": "kernel",
                   "calibration": model.calibration_json(), "analytic_c_mu": model.analytic_c_mu()}
        ok = model.residual is not None and model.residual <= 1e-6
    else:
        sector = _sector(args)
        op = inversion.inversion_operator(sector)
        d = np.eye(args.count)[0] if args.coeffs is None else _coeff_vector(args.coeffs)
        coeffs = op.apply(spectral.LaguerreExpansion.from_normalized(sector, d)).normalized()
        payload = op.to_json()
        ok = True
    payload["values"] = [complex(c) for c in coeffs]
    return payload, EXIT_OK if ok else EXIT_ACCEPTANCE


def _coeff_vector(text):
    try:
        return np.array([_complex_arg(t) for t in text.split(",") if t.strip()])
    except argparse.ArgumentTypeError as exc:
        raise ValidationError(str(exc)) from None


def cmd_semigroup(args):
    from . import spectral
    sector = _sector(args)
    t = args.t
    if t.real < 0:
        raise ValidationError("semigroup needs Re t >= 0")
    mult = np.exp(t * spectral.eigenvalues(sector, args.count))
    payload = {"sector": sector.as_dict(), "t": [t.real, t.imag]}
    if t.real > 0:
        op = spectral.semigroup_kernel(sector, t)
        hs_s = spectral.hs_norm_spectral(sector, t)
        hs_k = spectral.hs_norm_kernel(sector, t)
        payload.update(calibration=op.meta["calibration"], hs_norm_series=hs_s, hs_norm_kernel=hs_k)
        ok = abs(hs_s - hs_k) <= 1e-4
    else:
        payload["note"] = "Re t = 0: unitary boundary value; no Hilbert-Schmidt norm"
        ok = True
    payload["values"] = [complex(v) for v in mult]
    return payload, EXIT_OK if ok else EXIT_ACCEPTANCE


def cmd_bargmann(args):
    from . import bargmann
    if not args.lam > 0:
        raise ValidationError("lambda must be positive")
    op = bargmann.bargmann_operator(args.lam)
    rep = bargmann.cayley_consistency(op, kmax=args.kmax, tol=1e-8)
    rep["values"] = [complex(v) for v in op.fock.weights(args.kmax + 1)]
    return rep, EXIT_OK if rep["passed"] else EXIT_ACCEPTANCE


def cmd_fourth_order(args):
    from . import fourth_order as fo
    if args.frobenius:
        b = [Fraction(x) for x in args.frobenius.split(",")]
        prm = fo.MeijerParams(tuple(b))
        u = fo.frobenius_solution(prm, args.N)
        res = fo.meijer_residual(prm, u)
        payload = {"series": u.to_json(), "residual_zero": res.is_zero(), "N": args.N,
                   "values": [float(c) for c in u.coeffs]}
        return payload, EXIT_OK if res.is_zero() else EXIT_ACCEPTANCE
    if args.scan:
        payload = fo.parameter_scan(maxdeg=args.maxdeg)
        payload["values"] = []
        return payload, EXIT_OK
    prm = fo.FourthOrderParams(args.mu, args.nu)
    polys = fo.polynomial_eigenfunctions(prm, args.gauge, args.maxdeg)
    payload = {"mu": str(prm.mu), "nu": str(prm.nu), "kappa": str(prm.kappa), "gauge": args.gauge,
               "operator": fo.d_operator(prm).to_json(),
               "eigenfunctions": [p.to_json() for p in polys],
               "values": [float(p.eigenvalue) for p in polys]}
    if args.reduce and polys:
        probe = fo.second_order_reduction_probe([(p, p.eigenvalue) for p in polys])
        probe.pop("_operator", None)
        payload["reduction"] = probe
    return payload, EXIT_OK


def cmd_cone_check(args):
    from . import cones
    c1 = cones.load_cone(args.c1)
    if (args.c2 is None) == (args.beta is None):
        raise ValidationError("give exactly one of --c2 or --beta")
    c2 = cones.load_cone(args.c2) if args.c2 else cones.RationalCone.ray(cones.parse_vector(args.beta))
    trivial, cert = cones.intersect_trivially(c1, c2)
    if not cones.verify_certificate(c1, c2, trivial, cert):  # pragma: no cover - guarded by tests
        return {"trivial": trivial, "error": "certificate failed verification"}, EXIT_ACCEPTANCE
    payload = {"trivial": trivial}
    cj = cones.certificate_to_json(cert)
    if cert["type"] == "witness":
        payload["witness"] = cj["point"]
    payload["certificate"] = cj
    payload["values"] = [float(Fraction(x)) for x in cj.get("point", cj.get("functional", []))]
    return payload, EXIT_OK


def cmd_catalog(args):
    from . import catalog
    if args.family:
        return {"families": [catalog.query(args.family).to_json()], "values": []}, EXIT_OK
    payload = catalog.to_json()
    payload["values"] = []
    return payload, EXIT_OK


def cmd_verify(args):
    from . import acceptance
    selected = None
    if args.criteria:
        selected = [int(x) for x in args.criteria.split(",")]
        if any(n not in acceptance.CRITERIA for n in selected):
            raise ValidationError(f"criteria must be among {sorted(acceptance.CRITERIA)}")
    results = acceptance.run_all(selected)
    for r in results:
        print(r.line(), file=sys.stderr)
    ok = all(r.passed for r in results)
    return {"passed": ok, "criteria": [r.to_json() for r in results],
            "values": [float(r.passed) for r in results]}, EXIT_OK if ok else EXIT_ACCEPTANCE


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", help="write the result here instead of stdout")
    common.add_argument("--cache-dir", help="node-table cache (overrides MINREP_CACHE)")

    sector = argparse.ArgumentParser(add_help=False)
    sector.add_argument("--a", type=_fraction_arg, default=Fraction(1), help="deformation parameter a > 0")
    sector.add_argument("--m", type=_positive_int, default=3)

    p = _Parser(prog="minrep", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("spectrum", parents=[common, sector], help="exact eigenvalues of D_a")
    s.add_argument("--ell", type=int, help="single sector; merged over ell when omitted")
    s.add_argument("--count", type=_positive_int, default=10)
    s.add_argument("--ell-max", type=int, default=None)
    s.set_defaults(func=cmd_spectrum)

    s = sub.add_parser("commutators", parents=[common, sector], help="exact sl2 relations")
    s.add_argument("--ell-max", type=int, default=3)
    s.set_defaults(func=cmd_commutators)

    s = sub.add_parser("transform", parents=[common, sector], help="unitary inversion operator")
    s.add_argument("--ell", type=int, default=0)
    s.add_argument("--count", type=_positive_int, default=10, help="truncation for the default input")
    s.add_argument("--coeffs", help="normalized input coefficients, comma separated (complex allowed)")
    s.add_argument("--lam", type=float, help="rank-1 kernel model with this lambda (calibrates c_mu)")
    s.set_defaults(func=cmd_transform)

    s = sub.add_parser("semigroup", parents=[common, sector], help="holomorphic semigroup e^{tD}")
    s.add_argument("--ell", type=int, default=0)
    s.add_argument("--t", type=_complex_arg, default=complex(1.0))
    s.add_argument("--count", type=_positive_int, default=10)
    s.set_defaults(func=cmd_semigroup)

    s = sub.add_parser("bargmann", parents=[common], help="rank-1 Bargmann transform checks")
    s.add_argument("--lam", type=float, default=1.0)
    s.add_argument("--kmax", type=int, default=10)
    s.set_defaults(func=cmd_bargmann)

    s = sub.add_parser("fourth-order", parents=[common], help="fourth-order theta operators")
    s.add_argument("--mu", type=_fraction_arg, default=Fraction(0))
    s.add_argument("--nu", type=_fraction_arg, default=Fraction(0))
    s.add_argument("--gauge", default="exp(-x)", choices=("exp(-x)", "exp(-x^2/2)"))
    s.add_argument("--maxdeg", type=int, default=5)
    s.add_argument("--reduce", action="store_true", help="run the second-order reduction probe")
    s.add_argument("--scan", action="store_true", help="half-integer parameter scan")
    s.add_argument("--frobenius", help="Meijer parameters b1,b2,b3,b4 for a Frobenius series")
    s.add_argument("--N", type=int, default=40)
    s.set_defaults(func=cmd_fourth_order)

    s = sub.add_parser("cone-check", parents=[common], help="does C meet the asymptotic K-support?")
    s.add_argument("--c1", required=True, help="cone JSON file")
    s.add_argument("--c2", help="second cone JSON file")
    s.add_argument("--beta", help="ray direction, e.g. '1,0'")
    s.set_defaults(func=cmd_cone_check)

    s = sub.add_parser("catalog", parents=[common], help="family table")
    s.add_argument("--family", choices=("split", "euclidean", "complex", "quaternionic"))
    s.set_defaults(func=cmd_catalog)

    s = sub.add_parser("verify", parents=[common], help="run the acceptance suite")
    s.add_argument("--criteria", help="comma-separated subset, e.g. '1,4'")
    s.set_defaults(func=cmd_verify)
    return p


def _encode(obj):
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def render(payload: dict, fmt: str) -> str:
    if fmt == "json":
        body = {"schema": SCHEMA, **{k: v for k, v in payload.items() if k != "values"}}
        if payload.get("values") and "eigenvalues" not in payload:
            body["values"] = payload["values"]
        return json.dumps(body, default=_encode) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", "value-real", "value-imag"])
    for i, v in enumerate(payload.get("values", [])):
        z = complex(v)
        w.writerow([i, repr(z.real), repr(z.imag)])
    return buf.getvalue()


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.cache_dir:
        os.environ["MINREP_CACHE"] = args.cache_dir
    try:
        payload, code = args.func(args)
    except (ValueError, KeyError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"minrep {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    text = render(payload, args.format)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def main():  # console entry point
    sys.exit(run())


if __name__ == "__main__":
    main()
