"""Points of E(K) in normalized homogeneous coordinates and the group law.

A point is a coprime triple [x : y : z] of equal-degree forms in S0..Sn.
The canonical representative scales the triple so that all coefficients are
integers with joint content 1 and the first nonzero coordinate among
(y, x, z) has positive graded-lex leading coefficient; point equality is
then syntactic comparison.

Addition is the affine chord-and-tangent law over the fraction field with a
final clear-denominators-and-normalize step.  Doubling additionally knows
two explicit projective formulas (here ``double_formula_d1`` with third
coordinate 8y^3z^3 and ``double_formula_d2``, valid on the curve, with third
coordinate 8y^3z); by default ``double`` cross-checks them against the
chord-and-tangent result on small points.

For height computations the doubling orbit is iterated through an internal
reduced affine representation x = a/e^2, y = b/e^3 with gcd(a, e) =
gcd(b, e) = 1, where the denominators of a point on an integral model are a
perfect square and its cube.  One doubling then costs a handful of
polynomial products plus one gcd against b^2; the common factor of the raw
duplication fraction never involves e, which keeps that gcd small.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd as int_gcd, lcm as int_lcm
from typing import Optional, Sequence, Tuple, Union

from .algebra.gcd import perfect_square_root, poly_gcd, poly_gcd_many
from .algebra.multipoly import MultiPoly, VarSpace, proj_space_of
from .algebra.ratfunc import RatFunc
from .curves import FunctionFieldCurve
from .errors import FFHeightsError, NotOnCurveError

_EXACT_ONCURVE_DEGREE = 12


def _joint_content(polys: Sequence[MultiPoly]) -> Fraction:
    """Unsigned joint content of several polynomials (0 if all zero)."""
    num = 0
    den = 1
    for p in polys:
        for c in p.terms.values():
            if type(c) is int:
                num = int_gcd(num, abs(c))
            else:
                num = int_gcd(num, abs(c.numerator))
                den = int_lcm(den, c.denominator)
    return Fraction(num, den)


class ProjPointK:
    """Normalized homogeneous coordinate triple of a K-point of P^2."""

    __slots__ = ("space", "x", "y", "z", "_hash")

    def __init__(self, space: VarSpace, x: MultiPoly, y: MultiPoly,
                 z: MultiPoly, _canonical: bool = False):
        if not _canonical:
            raise FFHeightsError("use normalize_point / from_affine")
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *args):
        raise AttributeError("ProjPointK is immutable")

    @property
    def degree(self) -> int:
        """Common degree of the normalized coordinates (0 for O)."""
        return max(p.total_degree() for p in (self.x, self.y, self.z)
                   if not p.is_zero)

    @property
    def is_zero_point(self) -> bool:
        return self.x.is_zero and self.z.is_zero

    def coords(self) -> Tuple[MultiPoly, MultiPoly, MultiPoly]:
        return (self.x, self.y, self.z)

    def affine_xy(self) -> Tuple[RatFunc, RatFunc]:
        """Affine coordinates (x/z, y/z) in the chart S0 = 1; not for O."""
        if self.is_zero_point:
            raise FFHeightsError("the zero point has no affine coordinates")
        zd = self.z.dehomogenize()
        xr = RatFunc(self.x.dehomogenize(), zd)
        yr = RatFunc(self.y.dehomogenize(), zd)
        return xr, yr

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProjPointK):
            return NotImplemented
        return (self.space == other.space and self.x == other.x
                and self.y == other.y and self.z == other.z)

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.space, self.x, self.y, self.z))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self) -> str:
        return f"[{self.x!r} : {self.y!r} : {self.z!r}]"


def normalize_point(x: MultiPoly, y: MultiPoly, z: MultiPoly) -> ProjPointK:
    """Canonical representative of [x : y : z].

    Inputs must be homogeneous forms in one projective space; coordinates of
    smaller degree are first padded with powers of the first variable (the
    interpretation of a coordinate of degree d < delta is the K-element
    form/S0^d, so padding is exact).  The common polynomial gcd is removed,
    the triple is scaled to integer coefficients with joint content 1, and
    the sign is fixed on the first nonzero coordinate among (y, x, z).
    """
    space = x.space
    if y.space != space or z.space != space:
        raise FFHeightsError("coordinates in mixed variable spaces")
    if space.kind != "proj":
        raise FFHeightsError("points need homogeneous coordinates")
    if x.is_zero and y.is_zero and z.is_zero:
        raise FFHeightsError("all-zero projective point")
    for p in (x, y, z):
        if not p.is_homogeneous():
            raise FFHeightsError(f"non-homogeneous coordinate {p!r}")
    delta = max(p.total_degree() for p in (x, y, z) if not p.is_zero)
    s0 = MultiPoly.variable(space, 0)
    coords = []
    for p in (x, y, z):
        if not p.is_zero and p.total_degree() < delta:
            p = p * s0 ** (delta - p.total_degree())
        coords.append(p)
    x, y, z = coords
    nonzero = [p for p in coords if not p.is_zero]
    g = poly_gcd_many(nonzero)
    if not g.is_constant:
        x, y, z = (p.exact_div(g) if not p.is_zero else p for p in (x, y, z))
    return _canonical(space, x, y, z)


def _canonical(space: VarSpace, x: MultiPoly, y: MultiPoly,
               z: MultiPoly) -> ProjPointK:
    content = _joint_content((x, y, z))
    pivot = y if not y.is_zero else (x if not x.is_zero else z)
    _, lead = pivot.leading_term()
    if lead < 0:
        content = -content
    if content != 1:
        scale = 1 / content
        x, y, z = x.scale(scale), y.scale(scale), z.scale(scale)
    return ProjPointK(space, x, y, z, _canonical=True)


def _trusted_point(space: VarSpace, x: MultiPoly, y: MultiPoly,
                   z: MultiPoly) -> ProjPointK:
    """Canonicalize a triple already known coprime and degree-matched."""
    return _canonical(space, x, y, z)


def zero_point(space: VarSpace) -> ProjPointK:
    """The group identity O = [0 : 1 : 0]."""
    return ProjPointK(space, MultiPoly.zero(space),
                      MultiPoly.const(space, 1), MultiPoly.zero(space),
                      _canonical=True)


def point_from_affine(curve_space_or_proj: VarSpace,
                      x: Union[RatFunc, MultiPoly, int, Fraction],
                      y: Union[RatFunc, MultiPoly, int, Fraction]) -> ProjPointK:
    """Build [x : y : 1] from affine coordinates over the fraction field."""
    if curve_space_or_proj.kind == "affine":
        affine = curve_space_or_proj
        proj = proj_space_of(affine)
    else:
        proj = curve_space_or_proj
        from .algebra.multipoly import chart_space
        affine = chart_space(proj)

    def to_rat(v) -> RatFunc:
        if isinstance(v, RatFunc):
            return v
        if isinstance(v, MultiPoly):
            return RatFunc.from_poly(v)
        return RatFunc.const(affine, v)

    xr, yr = to_rat(x), to_rat(y)
    den = xr.den * yr.den
    g = poly_gcd(xr.den, yr.den)
    if not g.is_constant:
        den = den.exact_div(g)
    xa = xr.num * den.exact_div(xr.den)
    ya = yr.num * den.exact_div(yr.den)
    delta = max(xa.total_degree(), ya.total_degree(), den.total_degree())
    return normalize_point(xa.homogenize(delta, proj),
                           ya.homogenize(delta, proj),
                           den.homogenize(delta, proj))


# ----------------------------------------------------------------------
# forms with S0-power denominators, used by the projective doubling formulas


@dataclass(frozen=True)
class _HomFrac:
    """A homogeneous form divided by a power of the first variable."""

    form: MultiPoly
    pole: int

    @classmethod
    def of(cls, form: MultiPoly, pole: int = 0) -> "_HomFrac":
        return cls(form, pole)

    def __add__(self, other: "_HomFrac") -> "_HomFrac":
        m = max(self.pole, other.pole)
        s0 = MultiPoly.variable(self.form.space, 0)
        a = self.form * s0 ** (m - self.pole) if m > self.pole else self.form
        b = other.form * s0 ** (m - other.pole) if m > other.pole else other.form
        return _HomFrac(a + b, m)

    def __sub__(self, other: "_HomFrac") -> "_HomFrac":
        return self + (-other)

    def __neg__(self) -> "_HomFrac":
        return _HomFrac(-self.form, self.pole)

    def __mul__(self, other: Union["_HomFrac", int]) -> "_HomFrac":
        if isinstance(other, int):
            return _HomFrac(self.form.scale(other), self.pole)
        return _HomFrac(self.form * other.form, self.pole + other.pole)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "_HomFrac":
        return _HomFrac(self.form ** n, self.pole * n)


def _curve_homfracs(curve: FunctionFieldCurve,
                    proj: VarSpace) -> Tuple[_HomFrac, _HomFrac]:
    if curve.A.is_zero:
        a = _HomFrac.of(MultiPoly.zero(proj))
    else:
        da = curve.A.total_degree()
        a = _HomFrac.of(curve.A.homogenize(da, proj), da)
    if curve.B.is_zero:
        b = _HomFrac.of(MultiPoly.zero(proj))
    else:
        db = curve.B.total_degree()
        b = _HomFrac.of(curve.B.homogenize(db, proj), db)
    return a, b


def _clear_homfracs(coords: Sequence[_HomFrac]) -> Tuple[MultiPoly, ...]:
    m = max(c.pole for c in coords)
    s0 = MultiPoly.variable(coords[0].form.space, 0)
    return tuple(c.form * s0 ** (m - c.pole) for c in coords)


# ----------------------------------------------------------------------
# curve membership


def curve_equation_form(curve: FunctionFieldCurve, P: ProjPointK) -> MultiPoly:
    """The form S0^D(y^2 z - x^3) - A~ x z^2 S0^{D-degA} - B~ z^3 S0^{D-degB};
    identically zero iff P lies on the curve."""
    a_h, b_h = _curve_homfracs(curve, P.space)
    x, y, z = _HomFrac.of(P.x), _HomFrac.of(P.y), _HomFrac.of(P.z)
    eq = y * y * z - x ** 3 - a_h * x * z * z - b_h * z ** 3
    return eq.form


def is_on_curve(curve: FunctionFieldCurve, P: ProjPointK, *,
                trials: int = 20, rng: Optional[random.Random] = None,
                force_exact: Optional[bool] = None) -> bool:
    """Membership test; exact expansion for small points, sampled otherwise.

    The sampled path certifies only failure (a witness point); success at
    ``trials`` random integer points is correct up to Schwartz-Zippel.
    """
    if P.is_zero_point:
        return True
    exact = force_exact
    if exact is None:
        exact = P.degree <= _EXACT_ONCURVE_DEGREE
    if exact:
        return curve_equation_form(curve, P).is_zero
    if rng is None:
        rng = random.Random(0x0C07)
    n = P.space.nvars
    da = max(curve.A.total_degree(), 0)
    db = max(curve.B.total_degree(), 0)
    d = max(da, db)
    a_form = (curve.A.homogenize(da, P.space)
              if not curve.A.is_zero else MultiPoly.zero(P.space))
    b_form = (curve.B.homogenize(db, P.space)
              if not curve.B.is_zero else MultiPoly.zero(P.space))
    for _ in range(trials):
        pt = [rng.randint(-10**6, 10**6) for _ in range(n)]
        if pt[0] == 0:
            pt[0] = 1
        xv, yv, zv = (c.evaluate(pt) for c in P.coords())
        s0 = Fraction(pt[0])
        av = a_form.evaluate(pt)
        bv = b_form.evaluate(pt)
        lhs = s0 ** d * (yv * yv * zv - xv ** 3)
        rhs = av * s0 ** (d - da) * xv * zv * zv + bv * s0 ** (d - db) * zv ** 3
        if lhs != rhs:
            return False
    return True


def _require_on_curve(curve: FunctionFieldCurve, P: ProjPointK) -> None:
    if not is_on_curve(curve, P):
        raise NotOnCurveError(f"point {P!r} is not on {curve!r}")


# ----------------------------------------------------------------------
# group law


def negate(P: ProjPointK) -> ProjPointK:
    if P.is_zero_point:
        return P
    return _trusted_point(P.space, P.x, -P.y, P.z)


def add(curve: FunctionFieldCurve, P: ProjPointK, Q: ProjPointK, *,
        check: bool = True) -> ProjPointK:
    """Chord-and-tangent addition over the fraction field."""
    if check:
        _require_on_curve(curve, P)
        _require_on_curve(curve, Q)
    if P.is_zero_point:
        return Q
    if Q.is_zero_point:
        return P
    x1, y1 = P.affine_xy()
    x2, y2 = Q.affine_xy()
    if x1 == x2:
        if y1 == -y2:
            return zero_point(P.space)
        if y1 != y2:
            raise NotOnCurveError("two curve points share x but y1 != +-y2")
        lam = (x1 * x1 * 3 + curve.A) / (y1 * 2)
    else:
        lam = (y2 - y1) / (x2 - x1)
    x3 = lam * lam - x1 - x2
    y3 = lam * (x1 - x3) - y1
    return point_from_affine(P.space, x3, y3)


def double(curve: FunctionFieldCurve, P: ProjPointK, *, check: bool = True,
           formula_check: Optional[bool] = None) -> ProjPointK:
    """[2]P.

    ``formula_check`` controls the built-in agreement test of the two
    projective duplication formulas against the reduced affine result; the
    default runs it for points of degree at most 6 (the formulas expand to
    degree ~6*delta and are meant as a citable self-check, not a fast path).
    """
    if check:
        _require_on_curve(curve, P)
    if P.is_zero_point:
        return P
    ep = _EPoint.from_point(curve, P, verified=True)
    result = _edouble(curve, ep).to_point(P.space)
    if formula_check is None:
        formula_check = P.degree <= 6
    if formula_check:
        d1 = double_formula_d1(curve, P)
        d2 = double_formula_d2(curve, P)
        if d1 != result or d2 != result:
            raise FFHeightsError(
                "duplication formulas disagree with the chord-tangent result")
    return result


def double_formula_d1(curve: FunctionFieldCurve, P: ProjPointK) -> ProjPointK:
    """Projective duplication with third coordinate 8 y^3 z^3."""
    if P.is_zero_point:
        return P
    a_h, b_h = _curve_homfracs(curve, P.space)
    x, y, z = _HomFrac.of(P.x), _HomFrac.of(P.y), _HomFrac.of(P.z)
    psi = x * x * 3 + a_h * z * z              # 3x^2 + Az^2
    fx = 2 * (y * z * (psi * psi - 2 * (x * z * (y * y * 4))))
    fy = -(psi ** 3) + z * (y * y * 4) * (
        x ** 3 * 8 + a_h * (x * z * z) * 2 - b_h * z ** 3 - y * y * z)
    fz = (y ** 3 * z ** 3) * 8
    cx, cy, cz = _clear_homfracs((fx, fy, fz))
    return normalize_point(cx, cy, cz)


def double_formula_d2(curve: FunctionFieldCurve, P: ProjPointK) -> ProjPointK:
    """Duplication with third coordinate 8 y^3 z; valid only on the curve
    (it is the first formula with x^3 eliminated through the curve
    equation and a factor z^2 removed)."""
    if P.is_zero_point:
        return P
    a_h, b_h = _curve_homfracs(curve, P.space)
    x, y, z = _HomFrac.of(P.x), _HomFrac.of(P.y), _HomFrac.of(P.z)
    y2 = y * y
    fx = 2 * (y * (x * y2 - a_h * (x * x * z) * 3 - b_h * (x * z * z) * 9
                   + (a_h * a_h) * z ** 3))
    inner = y2 - a_h * (x * z) - b_h * (z * z)
    fy = 4 * (y2 * (y2 * 7 - a_h * (x * z) * 6 - b_h * (z * z) * 9)) - (
        27 * (inner * inner) + 27 * (a_h * x ** 4)
        + 9 * (a_h * a_h * (x * x) * (z * z)) + a_h ** 3 * z ** 4)
    fz = (y ** 3 * z) * 8
    cx, cy, cz = _clear_homfracs((fx, fy, fz))
    return normalize_point(cx, cy, cz)


def scalar_multiply(curve: FunctionFieldCurve, m: int,
                    P: ProjPointK, *, check: bool = True) -> ProjPointK:
    """[m]P by double-and-add ([0]P = O, [-m]P = -[m]P)."""
    if check:
        _require_on_curve(curve, P)
    if m == 0 or P.is_zero_point:
        return zero_point(P.space)
    if m < 0:
        return negate(scalar_multiply(curve, -m, P, check=False))
    acc: Optional[ProjPointK] = None
    addend = P
    ep = _EPoint.from_point(curve, P, verified=True)
    remaining = m
    while True:
        if remaining & 1:
            acc = addend if acc is None else add(curve, acc, addend, check=False)
        remaining >>= 1
        if not remaining:
            break
        ep = _edouble(curve, ep)
        addend = ep.to_point(P.space)
    return acc if acc is not None else zero_point(P.space)


# ----------------------------------------------------------------------
# reduced affine representation for the doubling orbit


@dataclass(frozen=True)
class _EPoint:
    """x = a/e^2, y = b/e^3 with e primitive, positive leading coefficient,
    gcd(a, e) = gcd(b, e) = 1; ``infinity`` marks O."""

    a: Optional[MultiPoly]
    b: Optional[MultiPoly]
    e: Optional[MultiPoly]
    infinity: bool = False

    @classmethod
    def zero(cls) -> "_EPoint":
        return cls(None, None, None, infinity=True)

    @classmethod
    def from_point(cls, curve: FunctionFieldCurve, P: ProjPointK, *,
                   verified: bool = False) -> "_EPoint":
        if not verified:
            _require_on_curve(curve, P)
        if P.is_zero_point:
            return cls.zero()
        x, y = P.affine_xy()
        try:
            e = perfect_square_root(x.den)
        except ValueError:
            raise NotOnCurveError(
                "x-denominator of a curve point must be a perfect square"
            ) from None
        # on the curve the reduced y-denominator is exactly e^3
        e3 = e ** 3
        if y.den != e3:
            raise NotOnCurveError(
                "y-denominator of a curve point must be the 3/2 power of the "
                "x-denominator")
        return cls(x.num, y.num, e)

    def to_point(self, proj: VarSpace) -> ProjPointK:
        if self.infinity:
            return zero_point(proj)
        ae = self.a * self.e
        e3 = self.e ** 3
        delta = max(ae.total_degree(), self.b.total_degree(),
                    e3.total_degree())

        def pad(p: MultiPoly) -> MultiPoly:
            if p.is_zero:
                return MultiPoly.zero(proj)
            return p.homogenize(delta, proj)

        return _trusted_point(proj, pad(ae), pad(self.b), pad(e3))

    def height(self) -> int:
        """Degree of the normalized coordinate triple [a e : b : e^3]."""
        if self.infinity:
            return 0
        return max(self.a.total_degree() + self.e.total_degree(),
                   self.b.total_degree(), 3 * self.e.total_degree())

    def key(self) -> Tuple:
        if self.infinity:
            return ("O",)
        return (self.a, self.b, self.e)


class DoublingOrbit:
    """Iterator over [2^m]P staying in the reduced representation.

    Heights only need the coordinate degree of each iterate, which the
    reduced representation reads off directly; materializing a normalized
    point is optional and costs no gcd.
    """

    def __init__(self, curve: FunctionFieldCurve, P: ProjPointK, *,
                 check: bool = True):
        if check:
            _require_on_curve(curve, P)
        self.curve = curve
        self.proj = P.space
        self.level = 0
        self._ep = _EPoint.from_point(curve, P, verified=True)

    @property
    def is_zero(self) -> bool:
        return self._ep.infinity

    def height(self) -> int:
        return self._ep.height()

    def point(self) -> ProjPointK:
        return self._ep.to_point(self.proj)

    def key(self) -> Tuple:
        return self._ep.key()

    def step(self) -> None:
        self._ep = _edouble(self.curve, self._ep)
        self.level += 1


def _poly_sqrt(p: MultiPoly) -> MultiPoly:
    """Exact square root of a primitive positive-lead perfect square."""
    try:
        return perfect_square_root(p)
    except ValueError as exc:
        raise FFHeightsError(f"expected a perfect square: {exc}") from None


def _edouble(curve: FunctionFieldCurve, pt: _EPoint) -> _EPoint:
    """One doubling step in the reduced (a, b, e) representation."""
    if pt.infinity:
        return pt
    a, b, e = pt.a, pt.b, pt.e
    if b.is_zero:
        return _EPoint.zero()
    A, B = curve.A, curve.B
    e2 = e * e
    e4 = e2 * e2
    alpha = (a * a).scale(3) + (A * e4 if not A.is_zero else MultiPoly.zero(a.space))
    b2 = b * b
    ab2 = a * b2
    nx = alpha * alpha - ab2.scale(8)
    ny = alpha * (ab2.scale(4) - nx) - (b2 * b2).scale(8)
    eraw = (b * e).scale(2)
    if nx.is_zero:
        # x([2]P) = 0, so the whole denominator cancels and y([2]P) is a
        # polynomial; rebuild the representation from scratch
        y3 = RatFunc(ny, eraw ** 3)
        if not y3.is_poly():
            raise FFHeightsError("internal error: duplication with x = 0")
        return _EPoint(MultiPoly.zero(a.space), y3.as_poly(),
                       MultiPoly.const(a.space, 1))
    # The common factor of nx/(2be)^2 never involves e: modulo a prime
    # divisor of e, nx = a^4 (+ multiples of e) is coprime to e because
    # gcd(a, e) = 1.  Reducing against b^2 is therefore a complete reduction
    # of the duplication fraction, and the common factor is a perfect square.
    g = poly_gcd(nx, b2)
    s = MultiPoly.const(a.space, 1) if g.is_constant else _poly_sqrt(g)
    if s.is_constant:
        a3, b3, e3 = nx, ny, eraw
    else:
        s2 = s * s
        a3 = nx.exact_div(s2)
        b3 = ny.exact_div(s2 * s)
        e3 = eraw.exact_div(s)
    cont = e3.content()
    if cont != 1:
        e3 = e3.scale(1 / cont)
        a3 = a3.scale(1 / cont ** 2)
        b3 = b3.scale(1 / cont ** 3)
    return _EPoint(a3, b3, e3)


__all__ = [
    "DoublingOrbit",
    "ProjPointK",
    "add",
    "double",
    "double_formula_d1",
    "double_formula_d2",
    "is_on_curve",
    "curve_equation_form",
    "negate",
    "normalize_point",
    "point_from_affine",
    "scalar_multiply",
    "zero_point",
]
