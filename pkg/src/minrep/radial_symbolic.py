"""Exact algebra of radial functions and the sl2 operators that act on them.

A sector function is ``phi(r) Y(x/r)`` with ``Y`` a spherical harmonic of
degree ``ell`` on ``R^m``.  On such functions the Euler operator is
``r d/dr`` and the Laplacian acts as

    Delta_ell phi = phi'' + (m-1)/r phi' - ell(ell+m-2)/r**2 phi.

Radial parts are finite sums ``sum c_i r**s_i * exp(-c r**a)`` with
Gaussian-rational coefficients, so every commutator and eigenvalue identity
is checked with zero numerical error.

Operators are checked on the lattice ``{r**(ell + a k) exp(-r**a / a)}``.
That is enough: the operators are linear, the lattice span is invariant
under ``E``, ``r**a`` and ``r**(2-a) Delta_ell`` (the ``r**(ell-a)`` term
carries the indicial factor, which vanishes), and a relation that holds on
the span holds on its closure.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from . import specfun
from .sector import SectorModel, as_exact


class SmoothnessError(ValueError):
    """A negative power would push a smooth sector function below ``r**ell``."""


# ---------------------------------------------------------------------------
# Gaussian rationals


class QI:
    """Exact element ``re + im*i`` of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def of(cls, x) -> "QI":
        if isinstance(x, QI):
            return x
        if isinstance(x, (int, Fraction, str)):
            return cls(x, 0)
        raise TypeError(f"cannot embed {type(x).__name__} exactly in Q(i)")

    def __add__(self, o):
        try:
            o = QI.of(o)
        except TypeError:
            return NotImplemented
        return QI(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return QI(-self.re, -self.im)

    def __sub__(self, o):
        return self + (-QI.of(o))

    def __rsub__(self, o):
        return QI.of(o) - self

    def __mul__(self, o):
        try:
            o = QI.of(o)
        except TypeError:
            return NotImplemented
        return QI(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conj(self):
        return QI(self.re, -self.im)

    def __truediv__(self, o):
        o = QI.of(o)
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        p = self * o.conj()
        return QI(p.re / n, p.im / n)

    def __rtruediv__(self, o):
        return QI.of(o) / self

    def __eq__(self, o):
        try:
            o = QI.of(o)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        return f"({self.re}{'+' if self.im > 0 else '-'}{abs(self.im)}i)"

    def to_json(self):
        return {"re": str(self.re), "im": str(self.im)}

    @classmethod
    def from_json(cls, d):
        return cls(Fraction(d["re"]), Fraction(d["im"]))


I = QI(0, 1)


# ---------------------------------------------------------------------------
# Radial functions


@dataclass(frozen=True)
class SymbolicRadialFunction:
    """``sum coeff * r**exponent * exp(-c r**a)`` in sector ``(m, ell)``.

    ``terms`` maps exponent -> coefficient; zero coefficients are pruned.
    ``c == 0`` means no exponential factor (``a`` is then ignored).
    """

    terms: dict
    c: Fraction = Fraction(0)
    a: Fraction = Fraction(1)
    ell: int = 0
    m: int = 1
    smooth_at_origin: bool = False

    def __post_init__(self):
        clean = {}
        for s, v in self.terms.items():
            v = QI.of(v)
            if v:
                clean[Fraction(s)] = v
        object.__setattr__(self, "terms", dict(sorted(clean.items())))
        object.__setattr__(self, "c", Fraction(self.c))
        object.__setattr__(self, "a", Fraction(self.a))
        if self.c < 0 or self.a <= 0:
            raise ValueError("exponential factor needs c >= 0 and a > 0")

    # -- constructors ------------------------------------------------------
    @classmethod
    def monomial(cls, s, *, c=0, a=1, ell=0, m=1, coeff=1, smooth_at_origin=False):
        return cls({Fraction(s): QI.of(coeff)}, c, a, ell, m, smooth_at_origin)

    def _like(self, terms, smooth=None) -> "SymbolicRadialFunction":
        return SymbolicRadialFunction(
            terms, self.c, self.a, self.ell, self.m,
            self.smooth_at_origin if smooth is None else smooth,
        )

    # -- algebra -----------------------------------------------------------
    def _check_compatible(self, other):
        if (self.ell, self.m) != (other.ell, other.m):
            raise ValueError("functions live in different sectors")
        if self.terms and other.terms and (self.c, self.a if self.c else 0) != (
            other.c, other.a if other.c else 0
        ):
            raise ValueError("exponential factors differ")

    def __add__(self, other):
        self._check_compatible(other)
        base = self if self.terms else other
        out = dict(self.terms)
        for s, v in other.terms.items():
            out[s] = out.get(s, QI()) + v
        return base._like(out, self.smooth_at_origin and other.smooth_at_origin)

    def __neg__(self):
        return self._like({s: -v for s, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, z) -> "SymbolicRadialFunction":
        z = QI.of(z)
        return self._like({s: z * v for s, v in self.terms.items()})

    __rmul__ = scale

    def mul_power(self, p) -> "SymbolicRadialFunction":
        p = Fraction(p)
        return self._like({s + p: v for s, v in self.terms.items()})

    def derivative(self) -> "SymbolicRadialFunction":
        """``d/dr`` including the exponential factor."""
        out: dict = {}
        for s, v in self.terms.items():
            if s:
                out[s - 1] = out.get(s - 1, QI()) + v * s
            if self.c:
                e = s + self.a - 1
                out[e] = out.get(e, QI()) - v * (self.c * self.a)
        return self._like(out, False)

    def is_zero(self) -> bool:
        return not self.terms

    def on_lattice(self) -> bool:
        """Every exponent lies in ``ell + step * Z>=0`` (step ``a``, or 2 without exp factor)."""
        step = self.a if self.c else Fraction(2)
        for s in self.terms:
            q = (s - self.ell) / step
            if q < 0 or q.denominator != 1:
                return False
        return True

    def __eq__(self, other):
        if not isinstance(other, SymbolicRadialFunction):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return (self.ell, self.m) == (other.ell, other.m)
        return (
            self.terms == other.terms
            and (self.c, self.a if self.c else 0) == (other.c, other.a if other.c else 0)
            and (self.ell, self.m) == (other.ell, other.m)
        )

    def __hash__(self):
        return hash((tuple(self.terms.items()), self.c, self.ell, self.m))

    def evaluate(self, r):
        """Complex float value at ``r`` (scalar or NumPy array)."""
        import numpy as np

        r = np.asarray(r, dtype=float)
        tot = np.zeros(r.shape, dtype=complex)
        for s, v in self.terms.items():
            tot = tot + complex(v) * r ** float(s)
        if self.c:
            tot = tot * np.exp(-float(self.c) * r ** float(self.a))
        return tot

    def __repr__(self):
        if not self.terms:
            return "0"
        body = " + ".join(f"{v}*r^{s}" for s, v in self.terms.items())
        tail = f" * exp(-{self.c} r^{self.a})" if self.c else ""
        return f"({body}){tail}"

    # -- serialization -----------------------------------------------------
    def to_json(self) -> dict:
        return {
            "terms": [{"coeff": v.to_json(), "exponent": str(s)} for s, v in self.terms.items()],
            "expFactor": {"c": str(self.c), "a": str(self.a)},
            "ell": self.ell,
            "m": self.m,
            "smoothAtOrigin": self.smooth_at_origin,
        }

    @classmethod
    def from_json(cls, d) -> "SymbolicRadialFunction":
        terms = {Fraction(t["exponent"]): QI.from_json(t["coeff"]) for t in d["terms"]}
        ef = d.get("expFactor", {"c": "0", "a": "1"})
        return cls(terms, Fraction(ef["c"]), Fraction(ef["a"]), d["ell"], d["m"],
                   d.get("smoothAtOrigin", False))


# ---------------------------------------------------------------------------
# Operators


class OperatorSpec:
    """Base class for exact operators; supports ``+``, ``-``, ``@`` (composition) and scalars."""

    def __add__(self, other):
        return Sum((self, other))

    def __sub__(self, other):
        return Sum((self, Product((Scalar(QI(-1)), other))))

    def __matmul__(self, other):
        return Product((self, other))

    def __rmul__(self, z):
        return Product((Scalar(QI.of(z)), self))

    def __neg__(self):
        return Product((Scalar(QI(-1)), self))


@dataclass(frozen=True)
class Euler(OperatorSpec):
    def __repr__(self):
        return "E"


@dataclass(frozen=True)
class RadialLaplacian(OperatorSpec):
    def __repr__(self):
        return "Lap"


@dataclass(frozen=True)
class PowerMult(OperatorSpec):
    p: Fraction

    def __repr__(self):
        return f"r^{self.p}"


@dataclass(frozen=True)
class Scalar(OperatorSpec):
    z: QI

    def __repr__(self):
        return repr(self.z)


@dataclass(frozen=True)
class Sum(OperatorSpec):
    ops: tuple

    def __repr__(self):
        return "(" + " + ".join(map(repr, self.ops)) + ")"


@dataclass(frozen=True)
class Product(OperatorSpec):
    """Composition; the rightmost factor acts first."""

    ops: tuple

    def __repr__(self):
        return " ".join(map(repr, self.ops))


@dataclass(frozen=True)
class Commutator(OperatorSpec):
    A: OperatorSpec
    B: OperatorSpec

    def __repr__(self):
        return f"[{self.A!r}, {self.B!r}]"


def _apply(op, f: SymbolicRadialFunction) -> SymbolicRadialFunction:
    if isinstance(op, Euler):
        out: dict = {}
        for s, v in f.terms.items():
            out[s] = out.get(s, QI()) + v * s
            if f.c:
                e = s + f.a
                out[e] = out.get(e, QI()) - v * (f.c * f.a)
        return f._like(out)
    if isinstance(op, RadialLaplacian):
        d1 = f.derivative()
        ang = f.ell * (f.ell + f.m - 2)
        lap = d1.derivative() + d1.mul_power(-1).scale(f.m - 1) - f.mul_power(-2).scale(ang)
        return lap._like(lap.terms, False)
    if isinstance(op, PowerMult):
        g = f.mul_power(op.p)
        if op.p < 0 and f.smooth_at_origin and any(s < f.ell for s in g.terms):
            raise SmoothnessError(f"r^{op.p} drops below r^{f.ell}")
        return g
    if isinstance(op, Scalar):
        return f.scale(op.z)
    if isinstance(op, Sum):
        acc = f._like({})
        for o in op.ops:
            acc = acc + _apply(o, f)
        return acc
    if isinstance(op, Product):
        g = f
        for o in reversed(op.ops):
            g = _apply(o, g)
        return g
    if isinstance(op, Commutator):
        return _apply(op.A, _apply(op.B, f)) - _apply(op.B, _apply(op.A, f))
    raise TypeError(f"not an operator: {op!r}")


def apply(op: OperatorSpec, f: SymbolicRadialFunction) -> SymbolicRadialFunction:
    """Apply ``op`` exactly; smoothness at the origin is re-derived from the lattice."""
    g = _apply(op, f)
    return g._like(g.terms, f.smooth_at_origin and g.on_lattice())


def power(p) -> PowerMult:
    return PowerMult(Fraction(p))


def scalar(z) -> Scalar:
    return Scalar(QI.of(z))


# ---------------------------------------------------------------------------
# sl2 triples


@dataclass(frozen=True)
class Sl2Triple:
    h: OperatorSpec
    e: OperatorSpec
    f: OperatorSpec
    label: str
    m: int

    def rescaled(self, s) -> "Sl2Triple":
        """``(h, s e, f / s)`` -- again an sl2 triple."""
        s = QI.of(s)
        return Sl2Triple(self.h, s * self.e, (1 / s) * self.f, f"{self.label}*{s}", self.m)


def weil_triple(m: int) -> Sl2Triple:
    """``E + m/2``, ``(i/2)|x|^2``, ``(i/2) Delta`` on ``L^2(R^m, dx)``."""
    h = Euler() + scalar(Fraction(m, 2))
    e = QI(0, Fraction(1, 2)) * power(2)
    f = QI(0, Fraction(1, 2)) * RadialLaplacian()
    return Sl2Triple(h, e, f, "weil", m)


def so_triple(m: int) -> Sl2Triple:
    """``2E + m - 1``, ``2i|x|``, ``(i/2)|x| Delta`` on ``L^2(R^m, dx/|x|)``."""
    h = 2 * Euler() + scalar(m - 1)
    e = QI(0, 2) * power(1)
    f = QI(0, Fraction(1, 2)) * (power(1) @ RadialLaplacian())
    return Sl2Triple(h, e, f, "so_m12", m)


def deformed_triple(a, m: int, h_shift=0) -> Sl2Triple:
    """``(2/a)E + (m+a-2)/a``, ``(i/a)|x|^a``, ``(i/a)|x|^(2-a) Delta``.

    ``h_shift`` perturbs the constant of ``h`` (negative controls only).
    """
    a = Fraction(as_exact(a))
    h = Fraction(2) / a * Euler() + scalar((m + a - 2) / a + h_shift)
    e = QI(0, 1 / a) * power(a)
    f = QI(0, 1 / a) * (power(2 - a) @ RadialLaplacian())
    return Sl2Triple(h, e, f, f"deformed(a={a})", m)


def lattice_test_set(a, m: int, ell: int, kmax: int = 6) -> list[SymbolicRadialFunction]:
    """``r**(ell + a k) * exp(-r**a / a)`` for ``k = 0..kmax``."""
    a = Fraction(as_exact(a))
    return [
        SymbolicRadialFunction.monomial(ell + a * k, c=1 / a, a=a, ell=ell, m=m, smooth_at_origin=True)
        for k in range(kmax + 1)
    ]


@dataclass
class CommutatorReport:
    label: str
    residuals: dict = field(default_factory=dict)  # relation -> list of residual functions

    @property
    def passed(self) -> bool:
        return all(r.is_zero() for rs in self.residuals.values() for r in rs)

    def failures(self) -> list[str]:
        return [
            f"{rel} on test #{i}: {r!r}"
            for rel, rs in self.residuals.items()
            for i, r in enumerate(rs)
            if not r.is_zero()
        ]

    def to_json(self) -> dict:
        return {
            "triple": self.label,
            "verdict": "PASS" if self.passed else "FAIL",
            "residuals": {
                rel: [r.to_json() for r in rs] for rel, rs in self.residuals.items()
            },
        }


def commutator_check(triple: Sl2Triple, test_set: Iterable[SymbolicRadialFunction]) -> CommutatorReport:
    """Residuals of ``[h,e]-2e``, ``[h,f]+2f``, ``[e,f]-h`` on every test function."""
    tests = list(test_set)
    if not tests:
        raise ValueError("test set must be nonempty")
    h, e, f = triple.h, triple.e, triple.f
    rels = {
        "[h,e]-2e": Commutator(h, e) - 2 * e,
        "[h,f]+2f": Commutator(h, f) + 2 * f,
        "[e,f]-h": Commutator(e, f) - h,
    }
    rep = CommutatorReport(triple.label)
    for name, op in rels.items():
        rep.residuals[name] = [apply(op, g) for g in tests]
    return rep


def triples_agree(t1: Sl2Triple, t2: Sl2Triple, test_set) -> bool:
    """Elementwise operator equality on the test set."""
    for g in test_set:
        for x, y in ((t1.h, t2.h), (t1.e, t2.e), (t1.f, t2.f)):
            if not apply(x - y, g).is_zero():
                return False
    return True


# ---------------------------------------------------------------------------
# Eigenfunctions of D_a


def d_operator(a) -> OperatorSpec:
    """``D_a = (1/(2a)) (r**(2-a) Delta - r**a)`` = ``(-e + f) / (2i)`` of the deformed triple."""
    a = Fraction(as_exact(a))
    return (1 / (2 * a)) * ((power(2 - a) @ RadialLaplacian()) - power(a))


def eigenfunction(sector: SectorModel, k: int) -> SymbolicRadialFunction:
    """``r**ell L_k^nu((2/a) r**a) exp(-r**a / a)`` as an exact radial function."""
    if not sector.exact:
        raise TypeError("exact eigenfunctions need rational a")
    a, ell = sector.a, sector.ell
    coeffs = specfun.laguerre_coeffs(k, sector.nu)
    terms = {ell + a * j: c * (2 / a) ** j for j, c in enumerate(coeffs)}
    return SymbolicRadialFunction(terms, 1 / a, a, ell, sector.m, True)


def eigencheck_Da(sector: SectorModel, k: int):
    """``(eigenvalue, residual)`` with eigenvalue ``-(k + (nu+1)/2)`` and ``D_a g_k - lambda g_k``."""
    g = eigenfunction(sector, k)
    lam = -(k + (sector.nu + 1) / 2)
    res = apply(d_operator(sector.a), g) - g.scale(lam)
    return lam, res


def indicial_coefficient(a, m: int, ell: int, c=None) -> QI:
    """Coefficient of ``r**(ell-a)`` in ``r**(2-a) Delta_ell (r**ell exp(-c r**a))``."""
    a = Fraction(as_exact(a))
    c = 1 / a if c is None else Fraction(c)
    g = SymbolicRadialFunction.monomial(ell, c=c, a=a, ell=ell, m=m)
    img = apply(power(2 - a) @ RadialLaplacian(), g)
    return img.terms.get(Fraction(ell) - a, QI())


# ---------------------------------------------------------------------------
# 2x2 matrices over Q(i)


class Mat2:
    """Exact 2x2 matrix over Q(i)."""

    __slots__ = ("e",)

    def __init__(self, rows):
        self.e = tuple(tuple(QI.of(x) for x in row) for row in rows)

    def __matmul__(self, o):
        a, b = self.e, o.e
        return Mat2([[a[i][0] * b[0][j] + a[i][1] * b[1][j] for j in range(2)] for i in range(2)])

    def __add__(self, o):
        return Mat2([[self.e[i][j] + o.e[i][j] for j in range(2)] for i in range(2)])

    def __sub__(self, o):
        return Mat2([[self.e[i][j] - o.e[i][j] for j in range(2)] for i in range(2)])

    def __rmul__(self, z):
        z = QI.of(z)
        return Mat2([[z * x for x in row] for row in self.e])

    def det(self):
        (a, b), (c, d) = self.e
        return a * d - b * c

    def inv(self):
        (a, b), (c, d) = self.e
        dt = self.det()
        return Mat2([[d / dt, -b / dt], [-c / dt, a / dt]])

    def __eq__(self, o):
        return isinstance(o, Mat2) and self.e == o.e

    def __hash__(self):
        return hash(self.e)

    def __repr__(self):
        return f"Mat2({[list(r) for r in self.e]})"

    def to_json(self):
        return [[x.to_json() for x in row] for row in self.e]


def bracket(x: Mat2, y: Mat2) -> Mat2:
    return x @ y - y @ x


@dataclass(frozen=True)
class Sl2Basis:
    h: Mat2
    e: Mat2
    f: Mat2
    k: Mat2
    c1: Mat2


def standard_basis() -> Sl2Basis:
    h = Mat2([[1, 0], [0, -1]])
    e = Mat2([[0, 1], [0, 0]])
    f = Mat2([[0, 0], [1, 0]])
    k = I * (f - e)
    c1 = Mat2([[1, -I], [QI(0, Fraction(-1, 2)), Fraction(1, 2)]])
    return Sl2Basis(h, e, f, k, c1)


def cayley_factors() -> list[Mat2]:
    """The four factors whose product is the Cayley element ``c1``."""
    two_i = QI(0, 2)
    return [
        Mat2([[two_i, 0], [0, 1 / two_i]]),
        Mat2([[1, QI(0, Fraction(-1, 2))], [0, 1]]),
        Mat2([[0, -1], [1, 0]]),
        Mat2([[1, I], [0, 1]]),
    ]


def exp_ik(quarter_turns: int, k: Mat2) -> Mat2:
    """``exp(i (pi/2) q k)`` for an involution ``k`` (``k @ k == 1``), exactly.

    With ``k**2 = 1``, ``exp(i phi k) = cos(phi) + i sin(phi) k``; at multiples
    of ``pi/2`` the trigonometric values are 0 or +-1.
    """
    one = Mat2([[1, 0], [0, 1]])
    if k @ k != one:
        raise ValueError("k must square to the identity")
    cos = (1, 0, -1, 0)[quarter_turns % 4]
    sin = (0, 1, 0, -1)[quarter_turns % 4]
    return cos * one + (I * sin) * k


@dataclass
class MatrixReport:
    checks: dict

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_json(self):
        return {"verdict": "PASS" if self.passed else "FAIL",
                "checks": {k: ("PASS" if v else "FAIL") for k, v in self.checks.items()}}


def matrix_sl2_checks(basis: Sl2Basis | None = None) -> MatrixReport:
    """Bracket relations, ``Ad(c1) k = h``, ``exp(-(i pi/2) k) = w`` and the c1 factorization."""
    b = basis or standard_basis()
    prod = cayley_factors()
    acc = prod[0]
    for fct in prod[1:]:
        acc = acc @ fct
    w = Mat2([[0, -1], [1, 0]])
    checks = {
        "[h,e]=2e": bracket(b.h, b.e) == 2 * b.e,
        "[h,f]=-2f": bracket(b.h, b.f) == -2 * b.f,
        "[e,f]=h": bracket(b.e, b.f) == b.h,
        "k=i(-e+f)": b.k == I * (b.f - b.e),
        "Ad(c1)k=h": b.c1 @ b.k @ b.c1.inv() == b.h,
        "exp(-(i pi/2)k)=w": exp_ik(-1, b.k) == w,
        "c1=product of factors": acc == b.c1,
    }
    return MatrixReport(checks)


def dumps(obj) -> str:
    """JSON for functions and reports."""
    return json.dumps(obj.to_json(), indent=2)
