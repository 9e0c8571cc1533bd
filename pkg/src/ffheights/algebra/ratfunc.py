"""Reduced fractions of multivariate polynomials (elements of Q(T1,...,Tn)).

A :class:`RatFunc` keeps ``num/den`` with gcd(num, den) = 1 and the
denominator integer-primitive with positive leading coefficient, so equal
field elements have identical representations.  These are the coordinates
used by the affine chord-and-tangent group law.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

from ..errors import FFHeightsError
from .gcd import poly_gcd
from .multipoly import MultiPoly, Scalar, VarSpace

_Operand = Union["RatFunc", MultiPoly, int, Fraction]


class RatFunc:
    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly, *, reduce: bool = True):
        if den.is_zero:
            raise ZeroDivisionError("rational function with zero denominator")
        if num.space != den.space:
            raise FFHeightsError("numerator/denominator space mismatch")
        if reduce:
            if num.is_zero:
                den = MultiPoly.const(den.space, 1)
            else:
                g = poly_gcd(num, den)
                if not g.is_constant:
                    num = num.exact_div(g)
                    den = den.exact_div(g)
            cont = den.content()
            if cont != 1:
                den = den.scale(1 / cont)
                num = num.scale(1 / cont)
        self.num = num
        self.den = den

    # ------------------------------------------------------------------

    @classmethod
    def from_poly(cls, p: MultiPoly) -> "RatFunc":
        return cls(p, MultiPoly.const(p.space, 1), reduce=False)

    @classmethod
    def const(cls, space: VarSpace, value: Scalar) -> "RatFunc":
        return cls.from_poly(MultiPoly.const(space, value))

    @property
    def space(self) -> VarSpace:
        return self.num.space

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def is_poly(self) -> bool:
        return self.den.is_constant

    def as_poly(self) -> MultiPoly:
        if not self.den.is_constant:
            raise FFHeightsError("rational function has a nontrivial denominator")
        return self.num.scale(Fraction(1) / self.den.constant_value())

    # ------------------------------------------------------------------

    def _coerce(self, other: _Operand) -> "RatFunc":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, MultiPoly):
            return RatFunc.from_poly(other)
        return RatFunc.const(self.space, other)

    def __add__(self, other: _Operand) -> "RatFunc":
        o = self._coerce(other)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den, reduce=False)

    def __sub__(self, other: _Operand) -> "RatFunc":
        return self + (-self._coerce(other))

    def __rsub__(self, other: _Operand) -> "RatFunc":
        return self._coerce(other) - self

    def __mul__(self, other: _Operand) -> "RatFunc":
        o = self._coerce(other)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other: _Operand) -> "RatFunc":
        o = self._coerce(other)
        if o.num.is_zero:
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other: _Operand) -> "RatFunc":
        return self._coerce(other) / self

    def __pow__(self, n: int) -> "RatFunc":
        if n < 0:
            return RatFunc(self.den ** (-n), self.num ** (-n))
        return RatFunc(self.num ** n, self.den ** n, reduce=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, (RatFunc, MultiPoly, int, Fraction)):
            return NotImplemented
        o = self._coerce(other)
        # both reduced with canonical denominators, so compare cross products
        return self.num * o.den == o.num * self.den

    def __hash__(self) -> int:
        # canonicalize the numerator content sign pairing for hashing
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        if self.den.is_constant and self.den.constant_value() == 1:
            return repr(self.num)
        return f"({self.num!r})/({self.den!r})"

    def evaluate(self, values) -> Fraction:
        d = self.den.evaluate(values)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at the point")
        return self.num.evaluate(values) / d
