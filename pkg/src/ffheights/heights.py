"""Weil and canonical heights on E(K), height pairings, regulators.

The Weil height of a normalized point is the common degree of its coordinate
forms, equal to the degree of the pullback of a hyperplane under the rational
map the point induces.  The same number can be computed as a sum of local
orders against a list of prime divisors (plus the infinity hyperplane); both
methods are provided and must agree.

The canonical height attached to the zero divisor is the limit of
h([2^m]P) / (3*4^m).  With exact degrees available, the estimator tracks the
quadrupling defects |h([2^{m+1}]P) - 4 h([2^m]P)| <= C and telescopes them to
the rigorous tail bound sum_{k>=m} C/(3*4^{k+1}) = C/(9*4^m).  The a-priori
constant is C = 2 deg(disc) (the common factor cancelled by one duplication
divides a power of the discriminant); once two levels exist the constant is
tightened to the largest defect actually observed -- exact arithmetic
certifies the observed defects, and both constants are reported so the
extrapolation is visible.  Torsion points are recognized exactly: their
doubling orbit revisits a point (or collapses to O), at which moment the
estimate is pinned to 0 with zero error.

All values in this module are exact rationals; no floating point appears
anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .algebra.multipoly import MultiPoly, multiplicity_of
from .algebra.ratfunc import RatFunc
from .curves import FunctionFieldCurve
from .errors import (
    DegreeCeilingExceeded,
    DivisorListError,
    FFHeightsError,
    QuadruplingDefectError,
)
from .points import DoublingOrbit, ProjPointK, add

DEFAULT_DEGREE_CEILING = 2000


def weil_height(P: ProjPointK) -> int:
    """Common degree of the normalized coordinates (0 for O)."""
    return P.degree


def weil_height_divisor_sum(
        coords: Sequence[Union[RatFunc, MultiPoly, Tuple[MultiPoly, MultiPoly]]],
        prime_divisors: Sequence[MultiPoly]) -> int:
    """Height as a sum over prime divisors of max_i(-ord(f_i)) * deg.

    ``coords`` are K-elements given as reduced fractions (or polynomials);
    ``prime_divisors`` is a list of non-constant primitive polynomials,
    asserted prime in Q[T1,...,Tn], that must cover every factor of every
    numerator and denominator -- the infinity hyperplane is always accounted
    for automatically, with ord over there of a degree-d polynomial equal to
    -d.  Equals :func:`weil_height` of the corresponding normalized point.
    """
    rats: List[RatFunc] = []
    for c in coords:
        if isinstance(c, RatFunc):
            rats.append(c)
        elif isinstance(c, MultiPoly):
            rats.append(RatFunc.from_poly(c))
        else:
            rats.append(RatFunc(c[0], c[1]))
    if all(r.is_zero for r in rats):
        raise FFHeightsError("all coordinates are zero")
    for g in prime_divisors:
        if g.is_constant:
            raise DivisorListError(f"constant entry {g!r} in divisor list")
        if g.content() != 1:
            raise DivisorListError(f"entry {g!r} is not primitive")

    # coverage: after stripping all listed divisors, num and den are constant
    for r in rats:
        if r.is_zero:
            continue
        for part in (r.num, r.den):
            residual = part
            for g in prime_divisors:
                while True:
                    q = residual.try_exact_div(g)
                    if q is None:
                        break
                    residual = q
            if not residual.is_constant:
                raise DivisorListError(
                    f"divisor list does not cover {part!r}; residual "
                    f"{residual!r}", residual=residual)

    total = 0
    for g in prime_divisors:
        worst = None
        for r in rats:
            if r.is_zero:
                continue
            ordv = (multiplicity_of(r.num, g) if not r.num.is_constant else 0) \
                - (multiplicity_of(r.den, g) if not r.den.is_constant else 0)
            worst = -ordv if worst is None else max(worst, -ordv)
        total += worst * g.total_degree()
    # infinity hyperplane
    worst = None
    for r in rats:
        if r.is_zero:
            continue
        ordv = r.den.total_degree() - r.num.total_degree()
        worst = -ordv if worst is None else max(worst, -ordv)
    total += worst
    return total


# ----------------------------------------------------------------------
# canonical height estimates


@dataclass(frozen=True)
class HeightEstimate:
    """Level-m estimate h([2^m]P) / (3*4^m) with a telescoped error bound.

    ``constant_C`` is the telescoping constant in force when the estimate was
    issued (the observed-defect constant once two levels exist, the a-priori
    one before); ``error_bound = constant_C / (9*4^level)``.  ``torsion`` is
    set when the doubling orbit collapsed or cycled, in which case the value
    is exactly 0 with zero error.
    """

    level: int
    value: Fraction
    error_bound: Fraction
    constant_C: Fraction
    apriori_C: Fraction
    observed_C: Optional[Fraction]
    heights: Tuple[int, ...]
    torsion: bool
    history: Tuple[Tuple[int, Fraction, Fraction], ...]

    def interval(self) -> "PairingInterval":
        return PairingInterval(self.value, self.error_bound)

    def __repr__(self) -> str:
        if self.torsion:
            return f"HeightEstimate(0 exactly, torsion, level={self.level})"
        return (f"HeightEstimate({self.value} +- {self.error_bound}, "
                f"level={self.level})")


def canonical_height(curve: FunctionFieldCurve, P: ProjPointK,
                     target_error: Union[Fraction, int], *,
                     max_level: Optional[int] = None,
                     degree_ceiling: int = DEFAULT_DEGREE_CEILING,
                     check: bool = True) -> HeightEstimate:
    """Estimate the canonical height of P with certified-defect error bounds.

    Doubling continues until the tail bound drops to ``target_error`` or
    ``max_level`` is reached (whichever comes first); exceeding
    ``degree_ceiling`` on a coordinate degree aborts with a diagnostic.
    """
    target = Fraction(target_error)
    if target <= 0:
        raise FFHeightsError("target_error must be positive")
    apriori = Fraction(2 * max(curve.disc.total_degree(), 0))
    orbit = DoublingOrbit(curve, P, check=check)
    heights: List[int] = []
    defects: List[int] = []
    history: List[Tuple[int, Fraction, Fraction]] = []
    seen: Dict[Tuple, int] = {}

    def finish(level: int, torsion: bool) -> HeightEstimate:
        if torsion:
            value = Fraction(0)
            err = Fraction(0)
            c_used = Fraction(0)
        else:
            value = Fraction(heights[level], 3 * 4 ** level)
            c_used = Fraction(max(defects)) if defects else apriori
            err = c_used / (9 * 4 ** level)
        history.append((level, value, err))
        observed = Fraction(max(defects)) if defects else None
        return HeightEstimate(
            level=level, value=value, error_bound=err, constant_C=c_used,
            apriori_C=apriori, observed_C=observed,
            heights=tuple(heights), torsion=torsion,
            history=tuple(history))

    m = 0
    while True:
        if orbit.is_zero:
            heights.append(0)
            return finish(m, torsion=True)
        key = orbit.key()
        if key in seen:
            heights.append(orbit.height())
            return finish(m, torsion=True)
        seen[key] = m
        h = orbit.height()
        heights.append(h)
        if m >= 1:
            defect = abs(heights[m] - 4 * heights[m - 1])
            if defect > apriori:
                raise QuadruplingDefectError(
                    f"quadrupling defect {defect} at level {m} exceeds the "
                    f"a-priori constant {apriori}")
            defects.append(defect)
        c_used = Fraction(max(defects)) if defects else apriori
        err = c_used / (9 * 4 ** m)
        if err <= target or (max_level is not None and m >= max_level):
            return finish(m, torsion=False)
        history.append((m, Fraction(h, 3 * 4 ** m), err))
        orbit.step()
        m += 1
        if orbit.height() > degree_ceiling:
            raise DegreeCeilingExceeded(
                f"coordinate degree {orbit.height()} at level {m} exceeds "
                f"the ceiling {degree_ceiling} before reaching error "
                f"{target}", level=m, degree=orbit.height())


# ----------------------------------------------------------------------
# interval arithmetic for pairings and regulators


@dataclass(frozen=True)
class PairingInterval:
    """Closed interval [midpoint - radius, midpoint + radius], exact."""

    midpoint: Fraction
    radius: Fraction

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("negative interval radius")

    @classmethod
    def exact(cls, value) -> "PairingInterval":
        return cls(Fraction(value), Fraction(0))

    @property
    def lo(self) -> Fraction:
        return self.midpoint - self.radius

    @property
    def hi(self) -> Fraction:
        return self.midpoint + self.radius

    def contains(self, value) -> bool:
        return self.lo <= Fraction(value) <= self.hi

    def contains_zero(self) -> bool:
        return self.contains(0)

    def excludes_zero(self) -> bool:
        return not self.contains_zero()

    def overlaps(self, other: "PairingInterval") -> bool:
        return abs(self.midpoint - other.midpoint) <= self.radius + other.radius

    def __add__(self, other: "PairingInterval") -> "PairingInterval":
        return PairingInterval(self.midpoint + other.midpoint,
                               self.radius + other.radius)

    def __neg__(self) -> "PairingInterval":
        return PairingInterval(-self.midpoint, self.radius)

    def __sub__(self, other: "PairingInterval") -> "PairingInterval":
        return self + (-other)

    def scale(self, c) -> "PairingInterval":
        c = Fraction(c)
        return PairingInterval(self.midpoint * c, self.radius * abs(c))

    def __mul__(self, other: "PairingInterval") -> "PairingInterval":
        products = [self.lo * other.lo, self.lo * other.hi,
                    self.hi * other.lo, self.hi * other.hi]
        lo, hi = min(products), max(products)
        return PairingInterval((lo + hi) / 2, (hi - lo) / 2)

    def __repr__(self) -> str:
        return f"[{self.midpoint} +- {self.radius}]"


def height_pairing(curve: FunctionFieldCurve, P: ProjPointK, Q: ProjPointK,
                   target_error: Union[Fraction, int], *,
                   max_level: Optional[int] = None,
                   degree_ceiling: int = DEFAULT_DEGREE_CEILING
                   ) -> PairingInterval:
    """Interval for (hhat(P+Q) - hhat(P) - hhat(Q)) / 2.

    Each canonical height is estimated to ``target_error``, so the radius is
    at most 3/2 * target_error.
    """
    hs = [canonical_height(curve, X, target_error, max_level=max_level,
                           degree_ceiling=degree_ceiling)
          for X in (add(curve, P, Q), P, Q)]
    mid = (hs[0].value - hs[1].value - hs[2].value) / 2
    rad = (hs[0].error_bound + hs[1].error_bound + hs[2].error_bound) / 2
    return PairingInterval(mid, rad)


def pairing_matrix(curve: FunctionFieldCurve, points: Sequence[ProjPointK],
                   target_error: Union[Fraction, int], *,
                   max_level: Optional[int] = None,
                   degree_ceiling: int = DEFAULT_DEGREE_CEILING
                   ) -> List[List[PairingInterval]]:
    """Symmetric matrix of height-pairing intervals."""
    r = len(points)
    cache: Dict[Tuple[int, int], PairingInterval] = {}
    out: List[List[PairingInterval]] = [[None] * r for _ in range(r)]  # type: ignore
    for i in range(r):
        for j in range(i, r):
            iv = height_pairing(curve, points[i], points[j], target_error,
                                max_level=max_level,
                                degree_ceiling=degree_ceiling)
            out[i][j] = iv
            out[j][i] = iv
    return out


def interval_determinant(matrix: Sequence[Sequence[PairingInterval]]
                         ) -> PairingInterval:
    """Determinant by cofactor expansion in exact interval arithmetic."""
    n = len(matrix)
    if n == 0:
        return PairingInterval.exact(1)
    if n == 1:
        return matrix[0][0]
    acc = PairingInterval.exact(0)
    for j in range(n):
        minor = [[matrix[i][k] for k in range(n) if k != j]
                 for i in range(1, n)]
        term = matrix[0][j] * interval_determinant(minor)
        if j % 2:
            term = -term
        acc = acc + term
    return acc


def regulator_interval(curve: FunctionFieldCurve,
                       points: Sequence[ProjPointK],
                       target_error: Union[Fraction, int], *,
                       max_level: Optional[int] = None,
                       degree_ceiling: int = DEFAULT_DEGREE_CEILING
                       ) -> PairingInterval:
    """Interval determinant of the height-pairing matrix of ``points``.

    A return value excluding zero certifies independence modulo torsion; an
    interval containing zero is inconclusive (dependent sets always produce
    one).
    """
    matrix = pairing_matrix(curve, points, target_error,
                            max_level=max_level, degree_ceiling=degree_ceiling)
    return interval_determinant(matrix)


__all__ = [
    "DEFAULT_DEGREE_CEILING",
    "HeightEstimate",
    "PairingInterval",
    "canonical_height",
    "height_pairing",
    "interval_determinant",
    "pairing_matrix",
    "regulator_interval",
    "weil_height",
    "weil_height_divisor_sum",
]
