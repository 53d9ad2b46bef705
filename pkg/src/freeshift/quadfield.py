"""Exact arithmetic in Q(sqrt(2)).

Numbers are p + q*sqrt(2) with rational p, q.  Comparisons, floors and
absolute values are exact, which lets the circle-rotation instance decide
integrality and cell membership with no floating point at all.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class Quad:
    """p + q*sqrt(2) with exact rational coefficients."""

    p: Fraction = Fraction(0)
    q: Fraction = Fraction(0)

    @staticmethod
    def of(value: "Quad | Fraction | int") -> "Quad":
        if isinstance(value, Quad):
            return value
        return Quad(Fraction(value), Fraction(0))

    def __add__(self, other):
        o = Quad.of(other)
        return Quad(self.p + o.p, self.q + o.q)

    __radd__ = __add__

    def __sub__(self, other):
        o = Quad.of(other)
        return Quad(self.p - o.p, self.q - o.q)

    def __rsub__(self, other):
        return Quad.of(other) - self

    def __neg__(self):
        return Quad(-self.p, -self.q)

    def __mul__(self, other):
        o = Quad.of(other)
        return Quad(self.p * o.p + 2 * self.q * o.q, self.p * o.q + self.q * o.p)

    __rmul__ = __mul__

    def sign(self) -> int:
        """Exact sign of p + q*sqrt(2)."""
        if self.p == 0 and self.q == 0:
            return 0
        if self.p >= 0 and self.q >= 0:
            return 1
        if self.p <= 0 and self.q <= 0:
            return -1
        # Opposite signs: compare p^2 with 2 q^2; the sign follows the term
        # with the larger square.
        p2, q2 = self.p * self.p, 2 * self.q * self.q
        if p2 == q2:
            return 0  # impossible for q != 0 since sqrt(2) is irrational
        bigger_is_p = p2 > q2
        return (1 if self.p > 0 else -1) if bigger_is_p else (1 if self.q > 0 else -1)

    def __eq__(self, other):
        o = Quad.of(other)
        return self.p == o.p and self.q == o.q

    def __hash__(self):
        return hash((self.p, self.q))

    def __lt__(self, other):
        return (self - Quad.of(other)).sign() < 0

    def __le__(self, other):
        return (self - Quad.of(other)).sign() <= 0

    def __gt__(self, other):
        return (self - Quad.of(other)).sign() > 0

    def __ge__(self, other):
        return (self - Quad.of(other)).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self) -> float:
        return float(self.p) + float(self.q) * _SQRT2

    def __repr__(self) -> str:
        if self.q == 0:
            return f"Quad({self.p})"
        return f"Quad({self.p} + {self.q}*sqrt2)"

    def is_rational(self) -> bool:
        return self.q == 0

    def is_integer(self) -> bool:
        return self.q == 0 and self.p.denominator == 1

    def floor(self) -> int:
        """Exact integer floor, via a float estimate fixed up exactly."""
        est = math.floor(float(self))
        while (self - est).sign() < 0:
            est -= 1
        while (self - (est + 1)).sign() >= 0:
            est += 1
        return est


SQRT2 = Quad(Fraction(0), Fraction(1))
