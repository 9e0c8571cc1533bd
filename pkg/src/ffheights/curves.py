"""Weierstrass models y^2 = x^3 + A x + B over Q(T1,...,Tn).

Everything here is exact: the discriminant is the expanded polynomial
-16(4A^3 + 27B^2), minimality is certified through squarefree radicals
(p^4 | A and p^6 | B for some prime p iff the radical of the
multiplicity->=4 part of A and the radical of the multiplicity->=6 part of B
share a factor), and divisor factor lists are accepted only when exact
division reproduces the discriminant.

The infinity-chart model moves the poles of A and B away from the hyperplane
S0 = 0: with k = max(ceil(deg A / 4), ceil(deg B / 6)), the curve with
coefficients (S0/S1)^{4k} A and (S0/S1)^{6k} B is isomorphic to the original
via (x, y, z) -> ((S0/S1)^{2k} x, (S0/S1)^{3k} y, z) and its coefficients are
regular along S0 = 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Optional, Sequence, Tuple

from .algebra.gcd import poly_gcd, squarefree_decompose
from .algebra.multipoly import MultiPoly, VarSpace, multiplicity_of, s_space, t_space
from .errors import DivisorListError, FFHeightsError, SingularCurveError


def discriminant(A: MultiPoly, B: MultiPoly) -> MultiPoly:
    """Exact expanded discriminant -16(4A^3 + 27B^2); raises if zero."""
    if A.space != B.space:
        raise FFHeightsError("A and B live in different variable spaces")
    disc = (A ** 3).scale(4) + (B * B).scale(27)
    disc = disc.scale(-16)
    if disc.is_zero:
        raise SingularCurveError(
            "discriminant vanishes identically: y^2 = x^3 + Ax + B is singular")
    return disc


@dataclass(frozen=True)
class MinimalityCertificate:
    """Squarefree data recorded when a curve is certified minimal.

    ``a_radical4`` is the radical of the multiplicity->=4 part of A and
    ``b_radical6`` the radical of the multiplicity->=6 part of B; minimality
    holds because their gcd is constant (or one of them is empty).
    """

    a_radical4: Optional[MultiPoly]
    b_radical6: Optional[MultiPoly]


@dataclass(frozen=True)
class FunctionFieldCurve:
    """y^2 z = x^3 + A x z^2 + B z^3 with A, B in Q[T1,...,Tk].

    The ambient function field has at least one variable; the experiment
    front end restricts to k >= 2, while reduced curves over a parameter
    field use k = 1 through the same type.
    """

    space: VarSpace
    A: MultiPoly
    B: MultiPoly
    disc: MultiPoly
    minimality_certificate: Optional[MinimalityCertificate] = None

    @classmethod
    def create(cls, A: MultiPoly, B: MultiPoly) -> "FunctionFieldCurve":
        if A.space.kind != "affine":
            raise FFHeightsError("curve coefficients must be affine polynomials")
        return cls(space=A.space, A=A, B=B, disc=discriminant(A, B))

    @property
    def nvars(self) -> int:
        return self.space.nvars

    @property
    def proj(self) -> VarSpace:
        from .algebra.multipoly import proj_space_of
        return proj_space_of(self.space)

    def coefficient_degree(self) -> int:
        return max(self.A.total_degree(), self.B.total_degree())

    def is_certified_minimal(self) -> bool:
        return self.minimality_certificate is not None

    def __repr__(self) -> str:
        return f"EllipticCurve(y^2 = x^3 + ({self.A})*x + ({self.B}))"


def _radical_at_least(poly: MultiPoly, bound: int) -> Optional[MultiPoly]:
    """Radical of the part of ``poly`` with multiplicity >= bound; None when
    empty or when poly is zero (zero is divisible by everything)."""
    if poly.is_zero:
        return None
    dec = squarefree_decompose(poly)
    return dec.radical_with_min_multiplicity(bound)


def minimality_reduce(curve: FunctionFieldCurve
                      ) -> Tuple[FunctionFieldCurve, MultiPoly]:
    """Scale away all (p^4 | A, p^6 | B) prime divisors; returns (curve', u).

    The returned u satisfies A' = A / u^4 and B' = B / u^6, and no squarefree
    polynomial p has p^4 | A' and p^6 | B'.  u = 1 iff the input was already
    minimal.  H∞ is never touched: the reduction works with affine
    polynomials only, matching the convention that minimality is required at
    every prime divisor except the infinity hyperplane.
    """
    A, B = curve.A, curve.B
    space = curve.space
    u = MultiPoly.const(space, 1)
    while True:
        rad_a = _radical_at_least(A, 4)
        rad_b = _radical_at_least(B, 6)
        if A.is_zero:
            g = rad_b
        elif B.is_zero:
            g = rad_a
        elif rad_a is None or rad_b is None:
            g = None
        else:
            g = poly_gcd(rad_a, rad_b)
            if g.is_constant:
                g = None
        if g is None:
            break
        A = A.exact_div(g ** 4)
        B = B.exact_div(g ** 6)
        u = u * g
    cert = MinimalityCertificate(
        a_radical4=_radical_at_least(A, 4),
        b_radical6=_radical_at_least(B, 6),
    )
    reduced = FunctionFieldCurve(space=space, A=A, B=B,
                                 disc=discriminant(A, B),
                                 minimality_certificate=cert)
    return reduced, u


@dataclass(frozen=True)
class InfinityModel:
    """The isomorphic model with coefficients regular along S0 = 0.

    ``a_numerator`` and ``b_numerator`` are homogeneous forms of degree 4k
    and 6k such that A' = a_numerator / S1^{4k} and B' = b_numerator / S1^{6k}
    as degree-zero rational functions; a point [x : y : z] transports to
    [S0^{2k} S1^k x : S0^{3k} y : S1^{3k} z].
    """

    base: FunctionFieldCurve
    k: int
    a_numerator: MultiPoly
    b_numerator: MultiPoly

    @property
    def transport_exponents(self) -> Tuple[int, int]:
        return (2 * self.k, 3 * self.k)

    def specialize_coefficients(self, t: Sequence[int]
                                ) -> Tuple[Fraction, Fraction]:
        """(A'(t), B'(t)) at a point with nonzero S1 coordinate."""
        t1 = Fraction(t[1])
        if t1 == 0:
            raise FFHeightsError("infinity model has poles along S1 = 0")
        a = self.a_numerator.evaluate(t) / t1 ** (4 * self.k)
        b = self.b_numerator.evaluate(t) / t1 ** (6 * self.k)
        return a, b


def infinity_model(curve: FunctionFieldCurve) -> InfinityModel:
    """Build the S1-chart model with k = max(ceil(degA/4), ceil(degB/6))."""
    if curve.nvars < 1:
        raise FFHeightsError("infinity model needs a projective ambient space")
    deg_a = curve.A.total_degree()
    deg_b = curve.B.total_degree()
    k = 0
    if not curve.A.is_zero:
        k = max(k, ceil(deg_a / 4))
    if not curve.B.is_zero:
        k = max(k, ceil(deg_b / 6))
    proj = curve.proj
    s0 = MultiPoly.variable(proj, 0)
    if curve.A.is_zero:
        a_num = MultiPoly.zero(proj)
    else:
        a_num = curve.A.homogenize(deg_a, proj) * s0 ** (4 * k - deg_a)
    if curve.B.is_zero:
        b_num = MultiPoly.zero(proj)
    else:
        b_num = curve.B.homogenize(deg_b, proj) * s0 ** (6 * k - deg_b)
    return InfinityModel(base=curve, k=k, a_numerator=a_num, b_numerator=b_num)


@dataclass(frozen=True)
class ValidatedDivisors:
    """A user-supplied factor list verified against the discriminant.

    ``factors`` pairs each supplied polynomial with the exact multiplicity it
    carries in the discriminant; ``unit`` is the leftover rational constant.
    The factors are asserted prime in Q[T1,...,Tn] by the caller (primality
    over Q does not imply primality over an algebraically closed field; the
    heights computed here only ever consume Q-primes).
    """

    factors: Tuple[Tuple[MultiPoly, int], ...]
    unit: Fraction


def validate_divisor_list(curve: FunctionFieldCurve,
                          factors: Sequence[MultiPoly]) -> ValidatedDivisors:
    """Accept a factor list iff unit * prod(f_i^{m_i}) == disc exactly."""
    residual = curve.disc
    out = []
    for f in factors:
        if f.is_constant:
            raise DivisorListError(f"constant factor {f!r} in divisor list")
        if f.content() != 1:
            raise DivisorListError(
                f"factor {f!r} is not primitive with positive leading "
                f"coefficient")
        mult = 0
        while True:
            q = residual.try_exact_div(f)
            if q is None:
                break
            residual = q
            mult += 1
        if mult == 0:
            raise DivisorListError(
                f"factor {f!r} does not divide the discriminant",
                residual=residual)
        out.append((f, mult))
    if not residual.is_constant:
        raise DivisorListError(
            "factor list does not cover the discriminant; residual quotient "
            f"{residual!r}", residual=residual)
    return ValidatedDivisors(factors=tuple(out),
                             unit=residual.constant_value())


__all__ = [
    "FunctionFieldCurve",
    "InfinityModel",
    "MinimalityCertificate",
    "ValidatedDivisors",
    "discriminant",
    "infinity_model",
    "minimality_reduce",
    "validate_divisor_list",
]
