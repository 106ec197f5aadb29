"""Exact theta-calculus for the fourth-order operator and the Meijer-G equation.

Operators are finite sums ``sum c * x**p * theta**j`` (normal ordered, powers
of ``x`` on the left) with rational ``c``; ``theta = x d/dx``.  The only
commutation rule needed is ``theta x**q = x**q (theta + q)``.

The operator of interest is

    D_{mu,nu} = x**-2 ((theta+nu)(theta+mu+nu) - x**2) (theta(theta+mu) - x**2)
                - (mu-nu)(mu+nu+2)/2,

with the product read right to left (the right factor acts first).

Series are ``x**sigma * sum_{n<=N} c_n x**n`` with exact rational ``c_n``;
coefficients past ``N`` are unknown rather than zero, so every operator
output is truncated to the orders it determines.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import specfun
from ._exact import nullspace
from .sector import as_exact

MAX_DEGREE = 30


class IndicialViolation(ValueError):
    """Output has uncancelled terms below the series offset."""


class Resonance(ValueError):
    """Frobenius recursion hits a zero denominator (integer-spaced exponents)."""


def _q(x) -> Fraction:
    x = as_exact(x)
    if not isinstance(x, Fraction):
        raise TypeError(f"exact rational expected, got {x!r}")
    return x


# ---------------------------------------------------------------------------
# Operator algebra


class ThetaOperator:
    """``sum c x**p theta**j`` stored as ``{(p, j): c}``."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: Fraction(v) for k, v in (terms or {}).items() if v != 0}

    @classmethod
    def theta(cls, power: int = 1) -> "ThetaOperator":
        return cls({(0, power): 1})

    @classmethod
    def x(cls, p: int = 1) -> "ThetaOperator":
        return cls({(p, 0): 1})

    @classmethod
    def const(cls, c) -> "ThetaOperator":
        return cls({(0, 0): _q(c)})

    def __add__(self, other):
        other = _as_op(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return ThetaOperator(out)

    __radd__ = __add__

    def __neg__(self):
        return ThetaOperator({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-_as_op(other))

    def __rsub__(self, other):
        return _as_op(other) - self

    def __mul__(self, other):
        """Composition ``self o other``; scalars scale."""
        if not isinstance(other, ThetaOperator):
            c = _q(other)
            return ThetaOperator({k: c * v for k, v in self.terms.items()})
        out: dict = {}
        for (p, j), a in self.terms.items():
            for (q, k), b in other.terms.items():
                # x^p theta^j x^q theta^k = x^{p+q} (theta+q)^j theta^k
                for i in range(j + 1):
                    c = a * b * math.comb(j, i) * Fraction(q) ** (j - i)
                    if c:
                        key = (p + q, i + k)
                        out[key] = out.get(key, 0) + c
        return ThetaOperator(out)

    def __rmul__(self, other):
        return self * other

    __matmul__ = __mul__

    def __pow__(self, n: int):
        out = ThetaOperator.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, ThetaOperator) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "ThetaOperator(0)"
        parts = [f"({c})*x^{p}*theta^{j}" for (p, j), c in sorted(self.terms.items())]
        return "ThetaOperator(" + " + ".join(parts) + ")"

    @property
    def x_range(self) -> tuple[int, int]:
        ps = [p for p, _ in self.terms] or [0]
        return min(ps), max(ps)

    @property
    def order(self) -> int:
        return max((j for _, j in self.terms), default=0)

    def substitute_theta(self, new_theta: "ThetaOperator") -> "ThetaOperator":
        """Replace every ``theta`` by ``new_theta`` (conjugation by a multiplier)."""
        out = ThetaOperator()
        cache = {0: ThetaOperator.const(1)}
        for (p, j), c in self.terms.items():
            for i in range(1, j + 1):
                if i not in cache:
                    cache[i] = cache[i - 1] * new_theta
            out = out + ThetaOperator.x(p) * cache[j] * c
        return out

    def symbol_on(self, s) -> dict:
        """Image of ``x**s``: ``{p: coefficient}`` meaning ``coefficient * x**(s+p)``."""
        s = Fraction(s)
        out: dict = {}
        for (p, j), c in self.terms.items():
            out[p] = out.get(p, 0) + c * s**j
        return {p: v for p, v in out.items() if v}

    def to_json(self) -> dict:
        return {"terms": [{"p": p, "j": j, "c": str(c)} for (p, j), c in sorted(self.terms.items())]}


def _as_op(x) -> ThetaOperator:
    return x if isinstance(x, ThetaOperator) else ThetaOperator.const(x)


THETA = ThetaOperator.theta()
X = ThetaOperator.x()


@dataclass(frozen=True)
class FourthOrderParams:
    mu: Fraction
    nu: Fraction

    def __post_init__(self):
        object.__setattr__(self, "mu", _q(self.mu))
        object.__setattr__(self, "nu", _q(self.nu))

    @property
    def kappa(self) -> Fraction:
        return (self.mu - self.nu) * (self.mu + self.nu + 2) / 2


@dataclass(frozen=True)
class MeijerParams:
    b: tuple

    def __post_init__(self):
        if len(self.b) != 4:
            raise ValueError("Meijer equation needs four parameters b_1..b_4")
        object.__setattr__(self, "b", tuple(_q(v) for v in self.b))


def quadratic_factors(params: FourthOrderParams) -> tuple[ThetaOperator, ThetaOperator]:
    """``(left, right) = ((theta+nu)(theta+mu+nu) - x^2, theta(theta+mu) - x^2)``."""
    mu, nu = params.mu, params.nu
    left = (THETA + nu) * (THETA + mu + nu) - ThetaOperator.x(2)
    right = THETA * (THETA + mu) - ThetaOperator.x(2)
    return left, right


@lru_cache(maxsize=256)
def d_operator(params: FourthOrderParams, swap: bool = False) -> ThetaOperator:
    """Normal-ordered ``D_{mu,nu}``; ``swap=True`` applies the factors in the other order."""
    left, right = quadratic_factors(params)
    prod = right * left if swap else left * right
    return ThetaOperator.x(-2) * prod - params.kappa


def meijer_operator(params: MeijerParams) -> ThetaOperator:
    op = ThetaOperator.const(1)
    for b in params.b:
        op = op * (THETA - b)
    return op


def indicial_polynomial(op: ThetaOperator, s) -> Fraction:
    """Coefficient of ``x**(s + pmin)`` in ``op x**s``."""
    pmin, _ = op.x_range
    return op.symbol_on(s).get(pmin, Fraction(0))


# ---------------------------------------------------------------------------
# Series


@dataclass(frozen=True)
class ThetaSeries:
    """``x**sigma * sum_{n=0}^{N} coeffs[n] x**n`` on the full integer lattice."""

    sigma: Fraction
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "sigma", _q(self.sigma))
        object.__setattr__(self, "coeffs", tuple(_q(c) for c in self.coeffs))
        if not self.coeffs:
            raise ValueError("series needs at least one coefficient")

    @property
    def N(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def monomial(cls, sigma, N: int = 0, c=1) -> "ThetaSeries":
        return cls(sigma, (c,) + (0,) * N)

    @classmethod
    def from_polynomial(cls, coeffs, N: int | None = None, sigma=0) -> "ThetaSeries":
        coeffs = list(coeffs)
        N = len(coeffs) - 1 if N is None else N
        coeffs = (coeffs + [0] * (N + 1))[: N + 1]
        return cls(sigma, tuple(coeffs))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def truncate(self, N: int) -> "ThetaSeries":
        if N > self.N:
            raise ValueError("cannot extend a truncated series")
        return ThetaSeries(self.sigma, self.coeffs[: N + 1])

    def _aligned(self, other):
        if self.sigma != other.sigma:
            if (self.sigma - other.sigma).denominator != 1:
                raise ValueError("series live on different lattices")
            raise ValueError("series offsets differ; re-base first")
        n = min(self.N, other.N)
        return self.coeffs[: n + 1], other.coeffs[: n + 1]

    def __add__(self, other):
        a, b = self._aligned(other)
        return ThetaSeries(self.sigma, tuple(x + y for x, y in zip(a, b)))

    def __sub__(self, other):
        a, b = self._aligned(other)
        return ThetaSeries(self.sigma, tuple(x - y for x, y in zip(a, b)))

    def __mul__(self, c):
        c = _q(c)
        return ThetaSeries(self.sigma, tuple(c * v for v in self.coeffs))

    __rmul__ = __mul__

    def times_exp(self, c) -> "ThetaSeries":
        """``exp(c x) * self`` truncated at the same order."""
        c = _q(c)
        e = [c**i / math.factorial(i) for i in range(self.N + 1)]
        out = [sum(e[i] * self.coeffs[n - i] for i in range(n + 1)) for n in range(self.N + 1)]
        return ThetaSeries(self.sigma, tuple(out))

    def to_json(self) -> dict:
        return {"sigma": str(self.sigma), "coeffs": [str(c) for c in self.coeffs], "N": self.N}

    @classmethod
    def from_json(cls, data) -> "ThetaSeries":
        if isinstance(data, str):
            data = json.loads(data)
        coeffs = tuple(Fraction(c) for c in data["coeffs"])
        if "N" in data and int(data["N"]) != len(coeffs) - 1:
            raise ValueError("N disagrees with the coefficient count")
        return cls(Fraction(data["sigma"]), coeffs)


def apply_operator(op: ThetaOperator, u: ThetaSeries, strict: bool = True) -> ThetaSeries:
    """``op u`` on the orders it determines.

    Input order ``N`` and operator shifts ``pmin <= p <= pmax`` give an output
    known through index ``N + pmin``.  Indices below 0 must cancel when
    ``strict``; otherwise the output offset moves to ``sigma + pmin``.
    """
    pmin, _ = op.x_range
    lo = min(pmin, 0)
    top = u.N + pmin
    if top < 0:
        raise ValueError("input truncation too short for this operator")
    out = [Fraction(0)] * (top - lo + 1)
    for n, c in enumerate(u.coeffs):
        if c == 0:
            continue
        for p, v in op.symbol_on(u.sigma + n).items():
            idx = n + p
            if idx <= top:
                out[idx - lo] += c * v
    if lo < 0:
        below = out[:-lo]
        if strict:
            if any(below):
                raise IndicialViolation(
                    f"terms below x^{u.sigma} do not cancel: {[str(b) for b in below]}")
            return ThetaSeries(u.sigma, tuple(out[-lo:]))
        return ThetaSeries(u.sigma + lo, tuple(out))
    return ThetaSeries(u.sigma, tuple(out))


def apply_D(params: FourthOrderParams, u: ThetaSeries, swap: bool = False) -> ThetaSeries:
    """Exact ``D_{mu,nu} u`` with output truncation ``N - 2``."""
    if u.N < 2:
        raise ValueError("apply_D needs truncation N >= 2")
    return apply_operator(d_operator(params, swap), u)


def apply_meijer_lhs(params: MeijerParams, u: ThetaSeries) -> ThetaSeries:
    """``prod_j (theta - b_j) u``."""
    return apply_operator(meijer_operator(params), u)


def meijer_residual(params: MeijerParams, u: ThetaSeries) -> ThetaSeries:
    """``prod_j (theta - b_j) u - x u`` on orders ``0..N``."""
    return apply_operator(meijer_operator(params) - X, u)


def frobenius_solution(params: MeijerParams, N: int, root: int = 0) -> ThetaSeries:
    """Series solution ``x**b_root * sum c_n x**n`` of the Meijer equation with ``c_0 = 1``."""
    b = params.b
    sigma = b[root]
    c = [Fraction(1)]
    for n in range(1, N + 1):
        den = Fraction(1)
        for bj in b:
            den *= sigma + n - bj
        if den == 0:
            raise Resonance(f"exponent difference {n} is an integer; log terms needed")
        c.append(c[-1] / den)
    return ThetaSeries(sigma, tuple(c))


# ---------------------------------------------------------------------------
# Gauges and polynomial eigenfunctions


GAUGES = ("exp(-x)", "exp(-x^2/2)")


def gauged_operator(params: FourthOrderParams, gauge: str) -> ThetaOperator:
    """``g**-1 D g`` as a theta-operator.

    ``exp(-x)`` conjugates in the variable ``x`` (``theta -> theta - x``).
    ``exp(-x^2/2)`` first passes to ``y`` with ``x = y**2/2`` (so
    ``theta_x = theta_y / 2``) and conjugates by ``exp(-y**2/2)``; polynomials
    are then in ``y``.
    """
    D = d_operator(params)
    if gauge == "exp(-x)":
        return D.substitute_theta(THETA - X)
    if gauge == "exp(-x^2/2)":
        half = Fraction(1, 2)
        in_y = ThetaOperator()
        for (p, j), c in D.terms.items():
            in_y = in_y + ThetaOperator({(2 * p, j): c * half**p * half**j})
        return in_y.substitute_theta(THETA - ThetaOperator.x(2))
    raise ValueError(f"unknown gauge {gauge!r}; choose from {GAUGES}")


def ungauge(op: ThetaOperator, gauge: str = "exp(-x)") -> ThetaOperator:
    """Inverse of the ``exp(-x)`` conjugation: ``theta -> theta + x``."""
    if gauge != "exp(-x)":
        raise ValueError("inverse conjugation implemented for exp(-x)")
    return op.substitute_theta(THETA + X)


@dataclass(frozen=True)
class PolynomialEigenfunction:
    coeffs: tuple  # ascending, exact; leading coefficient 1
    eigenvalue: Fraction
    gauge: str

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def to_json(self) -> dict:
        return {"coeffs": [str(c) for c in self.coeffs], "eigenvalue": str(self.eigenvalue),
                "gauge": self.gauge, "degree": self.degree}


def _operator_rows(op: ThetaOperator, d: int, lam: Fraction):
    """Rows of ``(op - lam) sum_{s<=d} a_s x**s = 0`` over every output exponent."""
    rows: dict = {}
    for s in range(d + 1):
        for p, v in op.symbol_on(s).items():
            rows.setdefault(s + p, [Fraction(0)] * (d + 1))[s] += v
        rows.setdefault(s, [Fraction(0)] * (d + 1))[s] -= lam
    return [r for r in rows.values() if any(r)]


def polynomial_eigenfunctions(params: FourthOrderParams, gauge: str = "exp(-x)",
                              maxdeg: int = 8) -> list[PolynomialEigenfunction]:
    """All polynomial ``P`` with ``deg P <= maxdeg`` and ``(g**-1 D g) P = lam P``.

    For each degree ``d`` the candidate eigenvalue is the ``x**d -> x**d``
    entry; the exact nullspace of the full rectangular system then decides.
    Raising terms (``p > 0``) in the conjugated operator only add rows.
    """
    if maxdeg > MAX_DEGREE:
        raise ValueError(f"maxdeg is capped at {MAX_DEGREE}")
    op = gauged_operator(params, gauge)
    found = []
    seen = set()
    for d in range(maxdeg + 1):
        lam = op.symbol_on(d).get(0, Fraction(0))
        if (d, lam) in seen:
            continue
        seen.add((d, lam))
        for vec in nullspace(_operator_rows(op, d, lam), d + 1):
            if vec[d] != 0:
                lead = vec[d]
                found.append(PolynomialEigenfunction(tuple(v / lead for v in vec), lam, gauge))
                break
    return found


def gauged_eigenvalue_formula(params: FourthOrderParams, d: int) -> Fraction:
    """Diagonal of the ``exp(-x)``-conjugated operator: ``(2d+3+mu+2nu)(2d+1+mu) - kappa``."""
    mu, nu = params.mu, params.nu
    return (2 * d + 3 + mu + 2 * nu) * (2 * d + 1 + mu) - params.kappa


def _proportional(a, b) -> bool:
    if len(a) != len(b):
        return False
    pivot = next((i for i, v in enumerate(b) if v != 0), None)
    if pivot is None or a[pivot] == 0:
        return False
    r = a[pivot] / b[pivot]
    return all(x == r * y for x, y in zip(a, b))


def laguerre_match(poly: PolynomialEigenfunction, alpha) -> bool:
    """``P(x)`` proportional to ``L_k^alpha(2x)`` coefficientwise."""
    k = poly.degree
    ref = [c * 2**j for j, c in enumerate(specfun.laguerre_coeffs(k, alpha))]
    return _proportional(list(poly.coeffs), ref)


def hermite_match(poly: PolynomialEigenfunction) -> bool:
    """``P(y)`` proportional to the even Hermite polynomial of the same degree."""
    return poly.degree % 2 == 0 and _proportional(list(poly.coeffs), specfun.hermite_coeffs(poly.degree))


def _fit_alpha(polys):
    # L_1^alpha(2x) = alpha + 1 - 2x
    deg1 = next((p for p in polys if p.degree == 1), None)
    if deg1 is None:
        return None
    c0, c1 = deg1.coeffs
    return -2 * c0 / c1 - 1


def parameter_scan(grid=None, maxdeg: int = 5) -> dict:
    """Scan ``(mu, nu)`` for complete ladders of polynomial eigenfunctions.

    A parameter pair counts as a family when every degree ``0..maxdeg`` has a
    polynomial eigenfunction.  Each family is tested against Laguerre
    ``L_k^alpha(2x)`` (``exp(-x)`` gauge, ``alpha`` fitted from degree 1) and
    against even Hermite polynomials (``exp(-x^2/2)`` gauge, degrees ``2k``).
    """
    if grid is None:
        grid = [Fraction(n, 2) for n in range(-4, 5)]
    out = {"maxdeg": maxdeg, "grid": [str(g) for g in grid], "laguerre": [], "hermite": [], "other": []}
    for mu in grid:
        for nu in grid:
            prm = FourthOrderParams(mu, nu)
            polys = polynomial_eigenfunctions(prm, "exp(-x)", maxdeg)
            if len({p.degree for p in polys}) == maxdeg + 1:
                alpha = _fit_alpha(polys)
                entry = {"mu": str(mu), "nu": str(nu), "alpha": str(alpha),
                         "eigenvalues": [str(p.eigenvalue) for p in polys]}
                if alpha is not None and all(laguerre_match(p, alpha) for p in polys):
                    out["laguerre"].append(entry)
                else:
                    out["other"].append(entry)
            ypolys = polynomial_eigenfunctions(prm, "exp(-x^2/2)", 2 * maxdeg)
            even = [p for p in ypolys if p.degree % 2 == 0]
            if len(even) == maxdeg + 1 and all(hermite_match(p) for p in even):
                out["hermite"].append({"mu": str(mu), "nu": str(nu),
                                       "eigenvalues": [str(p.eigenvalue) for p in even]})
    return out


# ---------------------------------------------------------------------------
# Second-order reduction


_Q_POWERS = (-1, 0, 1)


def second_order_reduction_probe(functions, max_order: int = 2) -> dict:
    """Search ``R = sum_{i<=2} q_i(x) theta**i`` with ``q_i`` in ``span{x^-1, 1, x}``.

    ``functions`` is one or more pairs ``(u, _)`` where ``u`` is a
    :class:`ThetaSeries` or :class:`PolynomialEigenfunction` (then the
    polynomial in the gauged picture).  The probe solves ``R u_j = rho_j u_j``
    for all ``j`` at once, exactly, and reports an ``R`` with ``q_2 != 0``.
    """
    if isinstance(functions, tuple) and len(functions) == 2 and not isinstance(functions[0], tuple):
        functions = [functions]
    series = []
    for u, _lam in functions:
        if isinstance(u, PolynomialEigenfunction):
            u = ThetaSeries.from_polynomial(u.coeffs, u.degree + 2)
        if u.is_zero():
            raise ValueError("zero function is not an eigenfunction")
        series.append(u)
    basis = [(p, i) for i in range(max_order + 1) for p in _Q_POWERS]
    nq = len(basis)
    nunk = nq + len(series)
    rows = []
    for j, u in enumerate(series):
        imgs = [apply_operator(ThetaOperator({(p, i): 1}), u, strict=False) for p, i in basis]
        lo = min(im.sigma for im in imgs + [u])
        hi = min(im.sigma + im.N for im in imgs + [u])
        e = lo
        while e <= hi:
            row = [Fraction(0)] * nunk
            for col, im in enumerate(imgs):
                idx = e - im.sigma
                if 0 <= idx <= im.N:
                    row[col] += im.coeffs[int(idx)]
            idx = e - u.sigma
            if 0 <= idx <= u.N:
                row[nq + j] -= u.coeffs[int(idx)]
            if any(row):
                rows.append(row)
            e += 1
    sols = nullspace(rows, nunk)
    q2_cols = [c for c, (p, i) in enumerate(basis) if i == max_order]
    hit = next((v for v in sols if any(v[c] != 0 for c in q2_cols)), None)
    report = {"found": hit is not None, "functions": len(series), "equations": len(rows),
              "operator": None, "eigenvalues": None}
    if hit is not None:
        op = ThetaOperator({basis[c]: hit[c] for c in range(nq)})
        report["operator"] = op.to_json()
        report["eigenvalues"] = [str(v) for v in hit[nq:]]
        report["_operator"] = op
    return report
