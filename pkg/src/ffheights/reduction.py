"""Reduction of curves and points modulo rationally parametrized hypersurfaces.

Supported hypersurfaces are exactly those carrying a stored parametrization
that is an isomorphism onto the hypersurface: hyperplanes in any dimension
(solved for a pivot coordinate) and smooth plane conics (swept by the lines
through a rational point).  For these, prime divisors of the hypersurface
correspond one to one to prime divisors of the parameter space with degree
preserved, so the height of a reduced point over the hypersurface's function
field is the common degree of its normalized parameter-space coordinates.

The central diagnostic is the height defect

    defect(P, Gamma) = deg(Gamma) * h(P) - h_Gamma(P_Gamma) >= 0.

Substitution into coprime forms can only create common factors, never remove
degree, so the defect is nonnegative; defect zero at a level certifies that
the hypersurface avoids the codimension-two obstruction locus of that
iterate's coordinate map, and the degree identity holds exactly, with no
tolerance.  A nonzero defect flags the hypersurface as obstructed for this
point; reports say "no obstruction observed" rather than claiming the
converse, which is not decidable from finitely many levels.

Reduced curves are presented on an affine chart of the parameter line chosen
so the chart denominator divides a power of theta_0.  When the coefficients
still have chart poles (a conic meeting S0 = 0 in two distinct or conjugate
points), the model is cleared by the twist (x, y) -> (D^{2j} x, D^{3j} y),
which is an isomorphism over the parameter field and therefore leaves
canonical heights untouched.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import List, Optional, Sequence, Tuple, Union

from .algebra.gcd import poly_gcd, poly_gcd_many
from .algebra.multipoly import (
    MultiPoly,
    VarSpace,
    chart_space,
    param_space,
)
from .algebra.ratfunc import RatFunc
from .curves import FunctionFieldCurve, discriminant
from .errors import (
    FFHeightsError,
    PoleAtGamma,
    PreconditionError,
    SingularCurveError,
    SingularReduction,
)
from .heights import HeightEstimate, PairingInterval, canonical_height
from .points import (
    DoublingOrbit,
    ProjPointK,
    is_on_curve,
    normalize_point,
    point_from_affine,
)


@dataclass(frozen=True)
class RationalHypersurface:
    """Defining form plus a birational parametrization theta.

    ``theta`` maps the parameter space (projective of dimension n-1) onto the
    hypersurface; ``form(theta) = 0`` identically and the component forms
    share no common factor.  ``theta_chart`` is theta on the affine chart
    (first parameter = 1) and ``chart_pole`` is theta_0 on that chart, the
    denominator of reduced curve coefficients.
    """

    form: MultiPoly
    degree: int
    kind: str  # "hyperplane" | "conic"
    pspace: VarSpace
    chart: VarSpace
    theta: Tuple[MultiPoly, ...]
    theta_chart: Tuple[MultiPoly, ...]
    chart_pole: MultiPoly
    is_infinity: bool

    def chart_point(self, s: Sequence[Union[int, Fraction]]
                    ) -> Tuple[Fraction, ...]:
        """Ambient coordinates of the parameter-chart point s."""
        vals = [Fraction(v) for v in s]
        return tuple(t.evaluate(vals) for t in self.theta_chart)

    def __repr__(self) -> str:
        return f"Hypersurface({self.kind}, {self.form!r})"


def hyperplane(form: MultiPoly) -> RationalHypersurface:
    """Hypersurface data for a linear form (solved at its pivot coordinate).

    The infinity hyperplane S0 = 0 is constructed but flagged; reducing a
    curve at it fails with :class:`PoleAtGamma` because the curve
    coefficients have poles exactly there.
    """
    if form.is_zero:
        raise FFHeightsError("zero linear form")
    if form.space.kind != "proj" or form.total_degree() != 1 \
            or not form.is_homogeneous():
        raise FFHeightsError("hyperplane needs a homogeneous linear form")
    space = form.space
    n = space.nvars - 1
    coeffs = [Fraction(0)] * (n + 1)
    for exp, c in form.terms.items():
        coeffs[exp.index(1)] = Fraction(c)
    pivot = max(i for i, c in enumerate(coeffs) if c != 0)
    pspace = param_space(n)
    params = [MultiPoly.variable(pspace, i) for i in range(n)]
    theta: List[MultiPoly] = []
    free = iter(params)
    slots: List[Optional[MultiPoly]] = [None] * (n + 1)
    for i in range(n + 1):
        if i != pivot:
            slots[i] = next(free)
    acc = MultiPoly.zero(pspace)
    for i in range(n + 1):
        if i != pivot and coeffs[i] != 0:
            acc = acc + slots[i].scale(coeffs[i])
    slots[pivot] = acc.scale(Fraction(-1) / coeffs[pivot])
    theta = [s for s in slots]  # type: ignore[assignment]
    if not form.substitute(theta).is_zero:
        raise FFHeightsError("internal error: hyperplane parametrization")
    chart = chart_space(pspace)
    one = MultiPoly.const(chart, 1)
    chart_imgs = [one] + [MultiPoly.variable(chart, i) for i in range(n - 1)]
    theta_chart = tuple(t.substitute(chart_imgs) for t in theta)
    return RationalHypersurface(
        form=form.primitive_part(), degree=1, kind="hyperplane",
        pspace=pspace, chart=chart, theta=tuple(theta),
        theta_chart=theta_chart, chart_pole=theta_chart[0],
        is_infinity=(pivot == 0))


def _conic_matrix(form: MultiPoly) -> List[List[Fraction]]:
    m = [[Fraction(0)] * 3 for _ in range(3)]
    for exp, c in form.terms.items():
        idx = [i for i, e in enumerate(exp) for _ in range(e)]
        i, j = idx[0], idx[1]
        if i == j:
            m[i][i] += Fraction(c)
        else:
            m[i][j] += Fraction(c, 2)
            m[j][i] += Fraction(c, 2)
    return m


def _det3(m: List[List[Fraction]]) -> Fraction:
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def _search_conic_point(form: MultiPoly, bound: int) -> Optional[Tuple[int, ...]]:
    for height in range(1, bound + 1):
        for q in itertools.product(range(-height, height + 1), repeat=3):
            if max(abs(v) for v in q) != height:
                continue
            if all(v == 0 for v in q):
                continue
            if form.evaluate(q) == 0:
                return q
    return None


def conic(form: MultiPoly,
          rational_point: Optional[Sequence[Union[int, Fraction]]] = None,
          search_bound: int = 12) -> RationalHypersurface:
    """Parametrize a smooth plane conic by the lines through a rational point.

    Smoothness is the nonvanishing of the symmetric 3x3 determinant; the
    rational point is verified if supplied and otherwise searched for among
    small integer triples.  The parameters are then normalized by a linear
    change so that theta_0 becomes u^2, u*v, or stays irreducible, which
    fixes the chart denominator of reduced curves.
    """
    if form.space.nvars != 3:
        raise FFHeightsError("conics are supported in the plane only")
    if form.space.kind != "proj" or form.total_degree() != 2 \
            or not form.is_homogeneous():
        raise FFHeightsError("conic needs a homogeneous quadratic form")
    matrix = _conic_matrix(form)
    if _det3(matrix) == 0:
        raise SingularCurveError("singular quadratic form is not supported")
    if rational_point is not None:
        q = tuple(Fraction(v) for v in rational_point)
        if all(v == 0 for v in q):
            raise FFHeightsError("zero tuple is not a projective point")
        if form.evaluate(q) != 0:
            raise FFHeightsError(f"point {rational_point} is not on the conic")
        den = 1
        for v in q:
            den = den * v.denominator // _gcd_int(den, v.denominator) \
                if False else den
        from math import lcm
        den = lcm(*[v.denominator for v in q])
        qi = tuple(int(v * den) for v in q)
    else:
        found = _search_conic_point(form, search_bound)
        if found is None:
            raise FFHeightsError(
                f"no rational point with coordinates up to {search_bound} "
                f"found on the conic; supply one explicitly")
        qi = found

    grad = [form.derivative(i).evaluate(qi) for i in range(3)]
    pspace = param_space(2)
    u = MultiPoly.variable(pspace, 0)
    v = MultiPoly.variable(pspace, 1)
    theta = None
    for i0 in range(3):
        if qi[i0] == 0:
            continue
        others = [i for i in range(3) if i != i0]
        # sweep direction r = u*e_j + v*e_k over the line S_{i0} = 0
        r_coords = [MultiPoly.zero(pspace)] * 3
        r_coords = list(r_coords)
        r_coords[others[0]] = u
        r_coords[others[1]] = v
        f_of_r = form.substitute(r_coords)
        grad_dot_r = (r_coords[others[0]].scale(grad[others[0]])
                      + r_coords[others[1]].scale(grad[others[1]]))
        cand = tuple(f_of_r.scale(qi[i]) - grad_dot_r * r_coords[i]
                     for i in range(3))
        if all(c.is_zero for c in cand):
            continue
        if not cand[0].is_zero or True:
            g = poly_gcd_many([c for c in cand if not c.is_zero])
            if not g.is_constant:
                continue
        if cand[0].is_zero:
            continue
        if form.substitute(list(cand)).is_zero:
            theta = cand
            break
    if theta is None:
        raise FFHeightsError("internal error: conic sweep failed")
    theta = _normalize_conic_chart(pspace, theta)
    chart = chart_space(pspace)
    one = MultiPoly.const(chart, 1)
    w = MultiPoly.variable(chart, 0)
    theta_chart = tuple(t.substitute([one, w]) for t in theta)
    return RationalHypersurface(
        form=form.primitive_part(), degree=2, kind="conic", pspace=pspace,
        chart=chart, theta=tuple(theta), theta_chart=theta_chart,
        chart_pole=theta_chart[0], is_infinity=False)


def _gcd_int(a: int, b: int) -> int:
    from math import gcd
    return gcd(a, b)


def _normalize_conic_chart(pspace: VarSpace,
                           theta: Tuple[MultiPoly, ...]) -> Tuple[MultiPoly, ...]:
    """Move the zeros of theta_0 to the chart's infinity when they are
    rational, so reduced curve coefficients stay polynomial."""
    t0 = theta[0]
    alpha = Fraction(t0.terms.get((2, 0), 0))
    beta = Fraction(t0.terms.get((1, 1), 0))
    gamma = Fraction(t0.terms.get((0, 2), 0))
    disc = beta * beta - 4 * alpha * gamma
    roots: List[Tuple[Fraction, Fraction]] = []
    if alpha == 0:
        roots.append((Fraction(1), Fraction(0)))  # [1 : 0]
        if beta != 0:
            roots.append((-gamma / beta, Fraction(1)))
    elif disc == 0:
        roots.append((-beta / (2 * alpha), Fraction(1)))
        roots.append(roots[0])
    else:
        num = disc.numerator * disc.denominator
        if disc > 0 and isqrt(num) ** 2 == num:
            sq = Fraction(isqrt(disc.numerator * disc.denominator),
                          disc.denominator)
            roots.append(((-beta + sq) / (2 * alpha), Fraction(1)))
            roots.append(((-beta - sq) / (2 * alpha), Fraction(1)))
    if not roots:
        return theta  # theta_0 irreducible over Q; alpha != 0 keeps a chart
    if len(roots) == 1 or roots[0] == roots[1]:
        # double rational root -> send it to [0:1], theta_0 becomes c*u^2
        root = _as_int_pair(roots[0])
        col2 = root
        col1 = (1, 0) if root[0] * 0 + root[1] != 0 else (0, 1)
    else:
        # two rational roots -> send them to [0:1] and [1:0]
        r1, r2 = (_as_int_pair(r) for r in roots[:2])
        col1, col2 = r2, r1
    det = col1[0] * col2[1] - col1[1] * col2[0]
    if det == 0:
        col1 = (0, 1) if col2 != (0, 1) and col2[0] != 0 else (1, 0)
        det = col1[0] * col2[1] - col1[1] * col2[0]
        if det == 0:
            return theta
    u = MultiPoly.variable(pspace, 0)
    v = MultiPoly.variable(pspace, 1)
    new_u = u.scale(col1[0]) + v.scale(col2[0])
    new_v = u.scale(col1[1]) + v.scale(col2[1])
    return tuple(t.substitute([new_u, new_v]) for t in theta)


def _as_int_pair(root: Tuple[Fraction, Fraction]) -> Tuple[int, int]:
    a, b = root
    from math import lcm
    den = lcm(a.denominator, b.denominator)
    ai, bi = int(a * den), int(b * den)
    g = _gcd_int(abs(ai), abs(bi))
    if g:
        ai, bi = ai // g, bi // g
    return (ai, bi)


# ----------------------------------------------------------------------
# reduced curves and points


@dataclass(frozen=True)
class ReducedCurve:
    """Weierstrass model of the reduction over the parameter chart field.

    ``curve`` has polynomial coefficients in the chart variables; it is the
    honest reduction when ``twist_power`` is 0 and otherwise the isomorphic
    model with (A, B) scaled by ``chart_pole`` to the powers (4j, 6j).
    """

    gamma: RationalHypersurface
    curve: FunctionFieldCurve
    twist_power: int

    def transport_affine(self, x: RatFunc, y: RatFunc) -> Tuple[RatFunc, RatFunc]:
        if self.twist_power == 0:
            return x, y
        d = RatFunc.from_poly(self.gamma.chart_pole)
        return (x * d ** (2 * self.twist_power),
                y * d ** (3 * self.twist_power))


def reduce_curve(curve: FunctionFieldCurve,
                 gamma: RationalHypersurface) -> ReducedCurve:
    """Reduce the curve modulo the hypersurface.

    Raises :class:`PoleAtGamma` at the infinity hyperplane and
    :class:`SingularReduction` when the discriminant vanishes identically
    along the hypersurface (exactly the components of the discriminant
    locus).
    """
    if gamma.is_infinity:
        raise PoleAtGamma(
            "A and B have poles along S0 = 0; reduce the infinity-chart "
            "model instead")
    if gamma.pspace.nvars != curve.nvars:
        raise FFHeightsError("hypersurface lives in a different ambient space")
    a_frac = _reduce_coefficient(curve.A, gamma)
    b_frac = _reduce_coefficient(curve.B, gamma)
    d = gamma.chart_pole
    j = 0
    while True:
        scale = RatFunc.from_poly(d) ** (4 * j)
        scale6 = RatFunc.from_poly(d) ** (6 * j)
        a_t = a_frac * scale
        b_t = b_frac * scale6
        if a_t.is_poly() and b_t.is_poly():
            break
        j += 1
        if j > 64:
            raise FFHeightsError("internal error: unbounded chart poles")
    try:
        reduced = FunctionFieldCurve.create(a_t.as_poly(), b_t.as_poly())
    except SingularCurveError:
        raise SingularReduction(
            f"the discriminant vanishes identically along {gamma.form!r}; "
            f"the reduced cubic is singular") from None
    return ReducedCurve(gamma=gamma, curve=reduced, twist_power=j)


def _reduce_coefficient(poly: MultiPoly, gamma: RationalHypersurface) -> RatFunc:
    if poly.is_zero:
        return RatFunc.from_poly(MultiPoly.zero(gamma.chart))
    d = poly.total_degree()
    if d == 0:
        return RatFunc.const(gamma.chart, poly.constant_value())
    num = poly.homogenize(d).substitute(list(gamma.theta_chart))
    den = gamma.chart_pole ** d
    return RatFunc(num, den)


@dataclass(frozen=True)
class ReducedPoint:
    """Normalized parameter-space coordinates of a reduced point."""

    gamma: RationalHypersurface
    point: ProjPointK

    @property
    def coords(self) -> Tuple[MultiPoly, MultiPoly, MultiPoly]:
        return self.point.coords()

    def __repr__(self) -> str:
        return f"Reduced{self.point!r}"


def reduce_point(P: ProjPointK, gamma: RationalHypersurface) -> ReducedPoint:
    """Substitute the parametrization into the coordinates and renormalize.

    This never legitimately fails: the coordinates are coprime, so they
    cannot all vanish on an irreducible hypersurface; if they do, an
    invariant has been violated upstream and a hard error is raised.
    """
    theta = list(gamma.theta)
    imgs = [c.substitute(theta) if not c.is_zero
            else MultiPoly.zero(gamma.pspace) for c in P.coords()]
    if all(c.is_zero for c in imgs):
        raise FFHeightsError(
            "internal invariant violation: a coprime coordinate triple "
            "vanished identically along an irreducible hypersurface")
    return ReducedPoint(gamma=gamma, point=normalize_point(*imgs))


def gamma_weil_height(rp: ReducedPoint) -> int:
    """Height over the hypersurface's function field: the common degree of
    the normalized parameter-space coordinates."""
    return rp.point.degree


def reduced_curve_point(rc: ReducedCurve, rp: ReducedPoint) -> ProjPointK:
    """The reduced point as a point of the reduced (possibly twisted) model."""
    if rp.point.is_zero_point:
        from .points import zero_point
        return zero_point(rc.curve.proj)
    x, y = rp.point.affine_xy()
    x, y = rc.transport_affine(x, y)
    return point_from_affine(rc.curve.space, x, y)


# ----------------------------------------------------------------------
# defect diagnostics


@dataclass(frozen=True)
class DefectRecord:
    lhs: int      # height of the reduced point over the hypersurface field
    rhs: int      # deg(Gamma calculations) * height over K
    defect: int   # rhs - lhs >= 0

    @property
    def is_zero(self) -> bool:
        return self.defect == 0


def height_defect(curve: FunctionFieldCurve, P: ProjPointK,
                  gamma: RationalHypersurface) -> DefectRecord:
    """Exact integer comparison deg(Gamma)*h(P) vs h_Gamma(P_Gamma).

    Zero certifies that the hypersurface avoids the codimension-two
    obstruction components for this point (the degree identity is exact);
    the reduction must be nonsingular for the comparison to be meaningful,
    so singular reductions and the infinity hyperplane raise.
    """
    reduce_curve(curve, gamma)  # propagate PoleAtGamma / SingularReduction
    rhs = gamma.degree * P.degree
    lhs = gamma_weil_height(reduce_point(P, gamma))
    defect = rhs - lhs
    if defect < 0:
        raise FFHeightsError(
            f"negative height defect {defect}: invariant violation")
    return DefectRecord(lhs=lhs, rhs=rhs, defect=defect)


@dataclass(frozen=True)
class DefectRow:
    level: int
    lhs: int
    rhs: int
    defect: int


@dataclass(frozen=True)
class CanonicalComparison:
    k_estimate: HeightEstimate
    gamma_estimate: HeightEstimate
    k_interval: PairingInterval
    gamma_interval_over_degree: PairingInterval
    overlap: bool
    combined_radius: Fraction


@dataclass(frozen=True)
class DefectReport:
    """Per-level defects of [2^m]P plus the canonical-height comparison."""

    gamma: RationalHypersurface
    rows: Tuple[DefectRow, ...]
    comparison: Optional[CanonicalComparison]

    @property
    def all_defects_zero(self) -> bool:
        return all(r.defect == 0 for r in self.rows)

    def verdict(self) -> str:
        return ("no obstruction observed" if self.all_defects_zero
                else "obstructed")


def defect_report(curve: FunctionFieldCurve, P: ProjPointK,
                  gamma: RationalHypersurface, max_level: int,
                  target_error: Union[Fraction, int] = Fraction(1, 100), *,
                  compare_canonical: bool = True,
                  degree_ceiling: int = 2000) -> DefectReport:
    """Defects of [2^m]P for m = 0..max_level, plus canonical heights.

    All-zero defect rows give exact finite-level degree identities.  The
    canonical comparison estimates the height of P over K and the height of
    the reduced point over the parameter field divided by deg(Gamma); on an
    unobstructed hypersurface the两 intervals overlap.
    """
    rc = reduce_curve(curve, gamma)
    orbit = DoublingOrbit(curve, P)
    rows = []
    for m in range(max_level + 1):
        Q = orbit.point()
        rec = height_defect(curve, Q, gamma)
        rows.append(DefectRow(level=m, lhs=rec.lhs, rhs=rec.rhs,
                              defect=rec.defect))
        if m < max_level:
            orbit.step()
    comparison = None
    if compare_canonical:
        k_est = canonical_height(curve, P, target_error,
                                 max_level=max_level,
                                 degree_ceiling=degree_ceiling)
        rp = reduce_point(P, gamma)
        pg = reduced_curve_point(rc, rp)
        if not is_on_curve(rc.curve, pg):
            raise FFHeightsError(
                "internal error: reduced point is not on the reduced curve")
        g_est = canonical_height(
            rc.curve, pg, Fraction(target_error) * gamma.degree,
            max_level=max_level, degree_ceiling=degree_ceiling)
        k_iv = k_est.interval()
        g_iv = g_est.interval().scale(Fraction(1, gamma.degree))
        comparison = CanonicalComparison(
            k_estimate=k_est, gamma_estimate=g_est, k_interval=k_iv,
            gamma_interval_over_degree=g_iv,
            overlap=k_iv.overlaps(g_iv),
            combined_radius=k_iv.radius + g_iv.radius)
    return DefectReport(gamma=gamma, rows=tuple(rows), comparison=comparison)


__all__ = [
    "CanonicalComparison",
    "DefectRecord",
    "DefectReport",
    "DefectRow",
    "RationalHypersurface",
    "ReducedCurve",
    "ReducedPoint",
    "conic",
    "defect_report",
    "gamma_weil_height",
    "height_defect",
    "hyperplane",
    "reduce_curve",
    "reduce_point",
    "reduced_curve_point",
]
