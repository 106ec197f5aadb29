"""Exact rational polyhedral cones: trivial-intersection test and harmonic dimensions.

Everything runs over :class:`fractions.Fraction`.  Feasibility of
``A x = b, x >= 0`` is decided by a phase-I simplex with Bland's rule; an
infeasible system returns its Farkas vector ``y`` (``y A <= 0``, ``y b > 0``)
read off the final tableau.

Certificates returned by :func:`intersect_trivially` are self-contained and
checked by :func:`verify_certificate` without re-running any LP:

* ``witness``: a primitive integer point with nonnegative combinations in
  both cones;
* ``separator``: ``y`` with ``y.g >= 0`` on the generators of one cone and
  ``y.h < 0`` on every generator of the other (pointed) cone;
* ``exhaustive``: when neither cone is pointed, Farkas vectors proving that
  no common point has ``x_i = +-1`` for any coordinate ``i``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from itertools import combinations_with_replacement
from pathlib import Path

from ._exact import rank


class DimensionMismatch(ValueError):
    pass


def _frac(v) -> Fraction:
    if isinstance(v, float):
        raise TypeError("cones take exact rationals (int, Fraction or 'p/q' strings)")
    return Fraction(v)


@dataclass(frozen=True)
class RationalCone:
    """``{sum lam_i g_i : lam_i >= 0}``; the empty generator list is ``{0}``."""

    dim: int
    generators: tuple

    def __post_init__(self):
        gens = tuple(tuple(_frac(x) for x in g) for g in self.generators)
        for g in gens:
            if len(g) != self.dim:
                raise DimensionMismatch(f"generator {g} is not in Q^{self.dim}")
            if not any(g):
                raise ValueError("cone generators must be nonzero")
        object.__setattr__(self, "generators", gens)

    @classmethod
    def ray(cls, v) -> "RationalCone":
        v = tuple(_frac(x) for x in v)
        return cls(len(v), (v,))

    def to_json(self) -> dict:
        return {"dim": self.dim, "generators": [[str(x) for x in g] for g in self.generators]}

    @classmethod
    def from_json(cls, data) -> "RationalCone":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(int(data["dim"]), tuple(tuple(Fraction(x) for x in g) for g in data["generators"]))


AsymptoticSupport = RationalCone  # a single ray for minimal representations


# ---------------------------------------------------------------------------
# Exact simplex


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def feasible(A, b):
    """Decide ``A x = b, x >= 0``.

    Returns ``(True, x)`` or ``(False, y)`` with ``y A <= 0`` and ``y b > 0``.
    """
    A = [[Fraction(v) for v in row] for row in A]
    b = [Fraction(v) for v in b]
    m = len(A)
    n = len(A[0]) if m else 0
    if m == 0:
        return True, [Fraction(0)] * n
    sign = [1 if bi >= 0 else -1 for bi in b]
    # tableau rows: [A | I | b] with rows sign-flipped so that b >= 0
    T = [[sign[i] * v for v in A[i]] + [Fraction(int(i == j)) for j in range(m)] + [sign[i] * b[i]]
         for i in range(m)]
    basis = [n + i for i in range(m)]
    cost = [Fraction(0)] * n + [Fraction(1)] * m
    while True:
        # reduced costs c_j - c_B B^-1 A_j
        red = [cost[j] - sum(cost[basis[r]] * T[r][j] for r in range(m)) for j in range(n + m)]
        enter = next((j for j in range(n + m) if red[j] < 0), None)
        if enter is None:
            break
        ratios = [(T[r][-1] / T[r][enter], basis[r], r) for r in range(m) if T[r][enter] > 0]
        if not ratios:  # phase-I objective is bounded below by 0
            raise RuntimeError("unbounded phase-I problem")
        _, _, leave = min(ratios)
        piv = T[leave][enter]
        T[leave] = [v / piv for v in T[leave]]
        for r in range(m):
            if r != leave and T[r][enter] != 0:
                f = T[r][enter]
                T[r] = [a - f * c for a, c in zip(T[r], T[leave])]
        basis[leave] = enter
    obj = sum(cost[basis[r]] * T[r][-1] for r in range(m))
    if obj == 0:
        x = [Fraction(0)] * n
        for r, j in enumerate(basis):
            if j < n:
                x[j] = T[r][-1]
        return True, x
    # duals of the flipped system: y'_i = c_B B^-1 e_i, B^-1 sits in the artificial columns
    yflip = [sum(cost[basis[r]] * T[r][n + i] for r in range(m)) for i in range(m)]
    y = [sign[i] * yflip[i] for i in range(m)]
    # reduced costs of x are >= 0 so y A <= 0; y b equals the positive optimum
    return False, y


def _check_farkas(A, b, y) -> bool:
    n = len(A[0]) if A else 0
    return all(_dot(y, [row[j] for row in A]) <= 0 for j in range(n)) and _dot(y, b) > 0


def _pointing_functional(gens, dim):
    """``c`` with ``c . g >= 1`` for all generators, or ``None`` if the cone has a line."""
    if not gens:
        return [Fraction(0)] * dim
    # c = c+ - c-, slack s >= 0:  sum_k (c+_k - c-_k) g_k - s = 1
    A = [[g[k] for k in range(dim)] + [-g[k] for k in range(dim)]
         + [Fraction(-1 if i == j else 0) for j in range(len(gens))] for i, g in enumerate(gens)]
    ok, z = feasible(A, [1] * len(gens))
    if not ok:
        return None
    return [z[k] - z[dim + k] for k in range(dim)]


def _common_point(G, H, dim, row, rhs):
    """``G lam = H mu``, ``row . (H mu) = rhs``, ``lam, mu >= 0``."""
    nl, nm = len(G), len(H)
    A = [[G[j][k] for j in range(nl)] + [-H[j][k] for j in range(nm)] for k in range(dim)]
    A.append([Fraction(0)] * nl + [_dot(row, H[j]) for j in range(nm)])
    b = [Fraction(0)] * dim + [Fraction(rhs)]
    ok, z = feasible(A, b)
    return ok, z, A, b


def _separator(P, Q, dim):
    """``y`` with ``y.p >= 0`` on ``P`` and ``y.q <= -1`` on ``Q``."""
    # y = y+ - y-, slacks:  y.p - s = 0,  -y.q - t = 1
    rows, rhs = [], []
    ns = len(P) + len(Q)
    for i, p in enumerate(P):
        rows.append([*p, *[-v for v in p], *[Fraction(-1 if j == i else 0) for j in range(ns)]])
        rhs.append(Fraction(0))
    for i, q in enumerate(Q):
        rows.append([*[-v for v in q], *q, *[Fraction(-1 if j == len(P) + i else 0) for j in range(ns)]])
        rhs.append(Fraction(1))
    ok, z = feasible(rows, rhs)
    if not ok:
        return None
    return [z[k] - z[dim + k] for k in range(dim)]


def _primitive(v):
    den = 1
    for x in v:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = math.gcd(g, abs(x))
    return [x // g for x in ints] if g else ints, Fraction(den, g or 1)


def intersect_trivially(c1: RationalCone, c2: RationalCone):
    """Exact verdict on ``c1 & c2 == {0}`` with a certificate.

    Returns ``(trivial, certificate)``.
    """
    if c1.dim != c2.dim:
        raise DimensionMismatch(f"cones live in Q^{c1.dim} and Q^{c2.dim}")
    dim = c1.dim
    G, H = list(c1.generators), list(c2.generators)
    if not G or not H:
        cert = {"type": "empty", "note": "one cone is {0}"}
        # still give a separator when the other cone is pointed
        other, label = (H, "c1") if not G else (G, "c2")
        if other and _pointing_functional(other, dim) is not None:
            y = _separator([], other, dim)
            cert = {"type": "separator", "functional": y, "nonnegative_on": label}
        return True, cert
    for first, second, label in ((G, H, "c1"), (H, G, "c2")):
        c = _pointing_functional(second, dim)
        if c is None:
            continue
        ok, z, _, _ = _common_point(first, second, dim, c, 1)
        if ok:
            return False, _witness(G, H, z if label == "c1" else _swap(z, len(H), len(G)), dim)
        y = _separator(first, second, dim)
        if y is None:  # pragma: no cover - excluded by the separation theorem
            raise RuntimeError("no separator although the intersection is trivial")
        return True, {"type": "separator", "functional": y, "nonnegative_on": label}
    # neither cone is pointed: look for a common point with some x_i = +-1
    proofs = []
    for i in range(dim):
        e = [Fraction(int(k == i)) for k in range(dim)]
        for s in (1, -1):
            ok, z, A, b = _common_point(G, H, dim, e, s)
            if ok:
                return False, _witness(G, H, z, dim)
            proofs.append({"coordinate": i, "sign": s, "farkas": z})
    return True, {"type": "exhaustive", "proofs": proofs}


def _swap(z, n_first, n_second):
    return z[n_first:] + z[:n_first]


def _witness(G, H, z, dim):
    lam, mu = z[: len(G)], z[len(G):]
    p = [sum(lam[j] * G[j][k] for j in range(len(G))) for k in range(dim)]
    ints, scale = _primitive(p)
    return {"type": "witness", "point": ints,
            "c1_coefficients": [x * scale for x in lam], "c2_coefficients": [x * scale for x in mu]}


def verify_certificate(c1: RationalCone, c2: RationalCone, trivial: bool, cert: dict) -> bool:
    """Check a certificate exactly without solving anything."""
    G, H = c1.generators, c2.generators
    dim = c1.dim
    kind = cert.get("type")
    if kind == "witness":
        p = [Fraction(x) for x in cert["point"]]
        lam = [Fraction(x) for x in cert["c1_coefficients"]]
        mu = [Fraction(x) for x in cert["c2_coefficients"]]
        if trivial or not any(p) or min(lam + mu, default=0) < 0:
            return False
        in1 = all(sum(lam[j] * G[j][k] for j in range(len(G))) == p[k] for k in range(dim))
        in2 = all(sum(mu[j] * H[j][k] for j in range(len(H))) == p[k] for k in range(dim))
        return in1 and in2
    if not trivial:
        return False
    if kind == "empty":
        return not G or not H
    if kind == "separator":
        y = [Fraction(x) for x in cert["functional"]]
        pos, neg = (G, H) if cert["nonnegative_on"] == "c1" else (H, G)
        return all(_dot(y, g) >= 0 for g in pos) and all(_dot(y, h) < 0 for h in neg)
    if kind == "exhaustive":
        seen = set()
        for pr in cert["proofs"]:
            i, s = pr["coordinate"], pr["sign"]
            e = [Fraction(int(k == i)) for k in range(dim)]
            nl, nm = len(G), len(H)
            A = [[G[j][k] for j in range(nl)] + [-H[j][k] for j in range(nm)] for k in range(dim)]
            A.append([Fraction(0)] * nl + [_dot(e, H[j]) for j in range(nm)])
            b = [Fraction(0)] * dim + [Fraction(s)]
            if not _check_farkas(A, b, [Fraction(x) for x in pr["farkas"]]):
                return False
            seen.add((i, s))
        return len(seen) == 2 * dim
    return False


def certificate_to_json(cert: dict) -> dict:
    def conv(v):
        if isinstance(v, Fraction):
            return str(v)
        if isinstance(v, int) and not isinstance(v, bool):
            return str(v)
        if isinstance(v, list):
            return [conv(x) for x in v]
        if isinstance(v, dict):
            return {k: (v[k] if k in ("type", "nonnegative_on", "coordinate", "sign", "note")
                        else conv(v[k])) for k in v}
        return v

    return conv(cert)


# ---------------------------------------------------------------------------
# Harmonic polynomials


def _comb(n: int, k: int) -> int:
    return math.comb(n, k) if n >= 0 and k >= 0 else 0


def harmonic_dim_formula(m: int, j: int) -> int:
    """``C(j+m-1, m-1) - C(j+m-3, m-1)``."""
    return _comb(j + m - 1, m - 1) - _comb(j + m - 3, m - 1)


def harmonic_dim_bruteforce(m: int, j: int) -> int:
    """Kernel dimension of the Laplacian on degree-``j`` monomials in ``m`` variables."""
    monos = list(combinations_with_replacement(range(m), j))
    exps = []
    for mono in monos:
        e = [0] * m
        for v in mono:
            e[v] += 1
        exps.append(tuple(e))
    if j < 2:
        return len(exps)
    targets = {}
    cols = []
    for e in exps:
        col = {}
        for i in range(m):
            if e[i] >= 2:
                t = list(e)
                t[i] -= 2
                t = tuple(t)
                col[t] = col.get(t, 0) + e[i] * (e[i] - 1)
                targets.setdefault(t, len(targets))
        cols.append(col)
    rows = [[Fraction(0)] * len(exps) for _ in targets]
    for c, col in enumerate(cols):
        for t, v in col.items():
            rows[targets[t]][c] = Fraction(v)
    return len(exps) - rank(rows, len(exps))


def harmonic_dim(m: int, j: int, method: str = "formula") -> int:
    """``dim H^j(R^m)``."""
    if m < 1 or j < 0:
        raise ValueError("need m >= 1 and j >= 0")
    if method == "formula":
        return harmonic_dim_formula(m, j)
    if method == "bruteforce":
        return harmonic_dim_bruteforce(m, j)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# Files


def load_cone(path) -> RationalCone:
    return RationalCone.from_json(Path(path).read_text())


def save_cone(cone: RationalCone, path) -> None:
    Path(path).write_text(json.dumps(cone.to_json(), indent=2) + "\n")


def bundled_examples() -> list[dict]:
    """Worked pairs shipped with the package (cones, rays, expected verdicts)."""
    text = resources.files("minrep").joinpath("data/cones_example.json").read_text()
    return json.loads(text)["examples"]


def parse_vector(text: str) -> tuple:
    """``"1,0"`` or ``"1/2, -3"`` to a tuple of Fractions."""
    return tuple(Fraction(t.strip()) for t in text.split(",") if t.strip())
