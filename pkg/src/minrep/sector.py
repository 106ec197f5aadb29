"""Sector parameters shared by the exact and floating-point modules."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational


def as_exact(x):
    """Fraction for ints, Fractions and ``"p/q"`` strings; floats pass through."""
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    return x


@dataclass(frozen=True)
class SectorModel:
    """One ``SL(2)~ x O(m)`` sector: deformation ``a``, dimension ``m``, harmonic degree ``ell``.

    ``a`` stays exact when given as an int, Fraction or ``"p/q"`` string.
    """

    a: object
    m: int
    ell: int = 0

    def __post_init__(self):
        object.__setattr__(self, "a", as_exact(self.a))
        if not self.a > 0:
            raise ValueError("deformation parameter a must be positive")
        if self.m < 1 or self.ell < 0:
            raise ValueError("need m >= 1 and ell >= 0")
        if not self.measure_exponent > -1:
            raise ValueError(f"radial measure r^{self.measure_exponent} dr is not locally integrable")
        if not self.nu > -1:
            raise ValueError(f"sector order nu={self.nu} must exceed -1")

    @property
    def nu(self):
        """Laguerre order ``(2 ell + m - 2) / a``."""
        return (2 * self.ell + self.m - 2) / self.a

    @property
    def measure_exponent(self):
        """Radial measure ``r**(m+a-3) dr`` induced by ``|x|**(a-2) dx``."""
        return self.m + self.a - 3

    @property
    def exact(self) -> bool:
        return isinstance(self.a, Fraction)

    def as_dict(self) -> dict:
        return {"a": str(self.a), "m": self.m, "ell": self.ell, "nu": str(self.nu)}
