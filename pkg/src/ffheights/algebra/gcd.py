"""Exact polynomial GCD and squarefree decomposition over Q.

The general algorithm is primitive-part recursion with subresultant
pseudo-remainder sequences in a main variable (the highest-index variable of
positive degree), which is deterministic and exact.  A modular coprimality
certificate keeps the common case cheap: if, for every shared variable, one
evaluation of the remaining variables at a random point modulo a word-size
prime preserves both leading coefficients and yields a univariate gcd of
degree zero, the true gcd is constant.  That is a proof, not a heuristic
(a nonconstant common divisor would keep its exact degree in such an image
because its leading coefficient divides a surviving one), and it dispatches
the large coprime inputs that dominate point normalization.

Squarefree decomposition is Yun's algorithm in the main variable with the
content recursed; no irreducible factorization is performed anywhere.
Callers that need honest prime divisors supply their own factor lists, which
are verified by exact division (see the curve module).  Such lists live over
Q: a factor irreducible over Q may well split over an algebraically closed
field, and operations documented as taking "prime divisors" mean primes of
Q[T1,...,Tn].
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from ..errors import FFHeightsError
from .multipoly import Coef, Exponent, MultiPoly, VarSpace

_CERT_PRIMES = (2147483647, 2147483629, 2147483587)
_CERT_TRIES = 4


# ----------------------------------------------------------------------
# public entry points


def poly_gcd(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """Primitive greatest common divisor, positive leading coefficient.

    The result divides both inputs exactly, every common divisor divides it,
    and it is integer-primitive with positive graded-lex leading coefficient.
    ``poly_gcd(0, 0) = 0`` by convention.
    """
    if f.space != g.space:
        raise FFHeightsError("gcd across different variable spaces")
    if f.is_zero and g.is_zero:
        return f
    if f.is_zero:
        return g.primitive_part()
    if g.is_zero:
        return f.primitive_part()
    if f.is_constant or g.is_constant:
        return MultiPoly.const(f.space, 1)
    if f.terms == g.terms:
        return f.primitive_part()

    shared = sorted(set(f.variables_used()) & set(g.variables_used()))
    if not shared:
        return MultiPoly.const(f.space, 1)

    fp = f.primitive_part()
    gp = g.primitive_part()
    used = set(fp.variables_used()) | set(gp.variables_used())
    if len(used) == 1:
        return _univariate_int_gcd(fp, gp, used.pop())
    if _certified_coprime(fp, gp, shared):
        return MultiPoly.const(f.space, 1)

    h = _gcd_recursive(fp, gp)
    h = h.primitive_part()
    if not h.is_constant:
        if fp.try_exact_div(h) is None or gp.try_exact_div(h) is None:
            raise FFHeightsError("internal error: gcd candidate fails division")
    return h


def poly_gcd_many(polys: Sequence[MultiPoly]) -> MultiPoly:
    """Fold :func:`poly_gcd` over a nonempty sequence."""
    if not polys:
        raise ValueError("gcd of an empty sequence")
    acc = polys[0]
    for p in polys[1:]:
        if acc.is_constant and not acc.is_zero:
            break
        acc = poly_gcd(acc, p)
    if acc.is_constant and not acc.is_zero:
        return MultiPoly.const(acc.space, 1)
    return acc


@dataclass(frozen=True)
class SquarefreeDecomposition:
    """``unit * prod(factor**multiplicity)`` reproduces the input exactly.

    Factors are pairwise coprime, squarefree, integer primitive with positive
    leading coefficient, and non-constant; the list is sorted by ascending
    multiplicity.
    """

    factors: Tuple[Tuple[MultiPoly, int], ...]
    unit: Fraction

    def reconstruct(self, space: VarSpace) -> MultiPoly:
        acc = MultiPoly.const(space, self.unit)
        for factor, mult in self.factors:
            acc = acc * factor ** mult
        return acc

    def radical_with_min_multiplicity(self, bound: int) -> Optional[MultiPoly]:
        """Product of the factors with multiplicity >= bound (None if empty)."""
        picked = [f for f, m in self.factors if m >= bound]
        if not picked:
            return None
        acc = picked[0]
        for p in picked[1:]:
            acc = acc * p
        return acc


def squarefree_decompose(f: MultiPoly) -> SquarefreeDecomposition:
    """Squarefree decomposition via iterated GCDs (Yun), content recursed."""
    if f.is_zero:
        raise FFHeightsError("squarefree decomposition of zero")
    if f.is_constant:
        return SquarefreeDecomposition((), f.constant_value())
    unit = Fraction(f.content())
    prim = f.scale(1 / unit)
    parts: Dict[int, MultiPoly] = {}
    _sqf_accumulate(prim, parts)
    merged: List[Tuple[MultiPoly, int]] = []
    for mult in sorted(parts):
        factor = parts[mult]
        cont = factor.content()
        if cont != 1:
            unit *= Fraction(cont) ** mult
            factor = factor.scale(1 / cont)
        if not factor.is_constant:
            merged.append((factor, mult))
    return SquarefreeDecomposition(tuple(merged), unit)


def radical(f: MultiPoly) -> MultiPoly:
    """Product of the distinct squarefree factors of f (f nonzero)."""
    dec = squarefree_decompose(f)
    acc = MultiPoly.const(f.space, 1)
    for factor, _ in dec.factors:
        acc = acc * factor
    return acc


def perfect_square_root(f: MultiPoly) -> MultiPoly:
    """Exact square root of a perfect square, positive leading coefficient.

    Solved coefficient-by-coefficient from the top in the main variable (all
    divisions are exact when f is a square), then verified by squaring.
    Raises ValueError when f is not a perfect square.
    """
    if f.is_zero:
        return f
    if f.is_constant:
        from math import isqrt
        c = Fraction(f.constant_value())
        if c < 0:
            raise ValueError("negative constant is not a square")
        num, den = isqrt(c.numerator), isqrt(c.denominator)
        if num * num != c.numerator or den * den != c.denominator:
            raise ValueError("constant is not a rational square")
        return MultiPoly.const(f.space, Fraction(num, den))
    var = f.variables_used()[-1]
    fu = _to_upoly(f, var)
    d2 = fu.degree
    if d2 % 2:
        raise ValueError("odd degree: not a perfect square")
    d = d2 // 2
    r: List[Optional[MultiPoly]] = [None] * (d + 1)
    r[d] = perfect_square_root(fu.coeffs[d2])
    two_lead = r[d].scale(2)
    zero = MultiPoly.zero(f.space)
    try:
        for j in range(d - 1, -1, -1):
            acc = fu.coeffs[d + j] if d + j <= fu.degree else zero
            for i in range(j + 1, d):
                k = d + j - i
                if j + 1 <= k <= d - 1:
                    acc = acc - r[i] * r[k]
            r[j] = acc.exact_div(two_lead)
    except Exception as exc:
        raise ValueError("polynomial is not a perfect square") from exc
    root = _from_upoly(f.space, var, _UPoly([c for c in r]))
    if root.leading_term()[1] < 0:
        root = -root
    if root * root != f:
        raise ValueError("polynomial is not a perfect square")
    return root


# ----------------------------------------------------------------------
# coprimality certificate


def _certified_coprime(f: MultiPoly, g: MultiPoly,
                       shared_vars: Sequence[int]) -> bool:
    """Prove gcd(f, g) is constant, or return False (no conclusion)."""
    rng = random.Random(0xC0FFEE ^ (len(f.terms) * 1000003 + len(g.terms)))
    return all(_var_certified_absent(f, g, var, rng) for var in shared_vars)


def _var_certified_absent(f: MultiPoly, g: MultiPoly, var: int,
                          rng: random.Random) -> bool:
    """Certify that no common divisor involves variable ``var``."""
    n = f.space.nvars
    df, dg = f.degree_in(var), g.degree_in(var)
    for attempt in range(_CERT_TRIES):
        p = _CERT_PRIMES[attempt % len(_CERT_PRIMES)]
        point = [rng.randrange(p) for _ in range(n)]
        cf = _eval_univariate_mod(f, var, point, p)
        cg = _eval_univariate_mod(g, var, point, p)
        if len(cf) - 1 != df or len(cg) - 1 != dg:
            continue  # a leading coefficient vanished; resample
        return _gf_gcd_degree(cf, cg, p) == 0
    return False


def _eval_univariate_mod(f: MultiPoly, var: int, point: Sequence[int],
                         p: int) -> List[int]:
    """Coefficients (low to high) of f mod p with all vars but ``var``
    evaluated at ``point``; trailing zeros stripped."""
    coeffs = [0] * (f.degree_in(var) + 1)
    cache: Dict[Tuple[int, int], int] = {}
    for exp, c in f.terms.items():
        if type(c) is int:
            val = c % p
        else:
            val = (c.numerator % p) * pow(c.denominator % p, -1, p) % p
        for i, e in enumerate(exp):
            if e and i != var:
                key = (i, e)
                pw = cache.get(key)
                if pw is None:
                    pw = pow(point[i], e, p)
                    cache[key] = pw
                val = val * pw % p
        coeffs[exp[var]] = (coeffs[exp[var]] + val) % p
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _gf_gcd_degree(a: List[int], b: List[int], p: int) -> int:
    while b:
        a, b = b, _gf_mod(a, b, p)
    return len(a) - 1


def _gf_mod(a: List[int], b: List[int], p: int) -> List[int]:
    a = a[:]
    inv = pow(b[-1], -1, p)
    db = len(b) - 1
    while a and len(a) - 1 >= db:
        q = a[-1] * inv % p
        shift = len(a) - 1 - db
        if q:
            for i, bc in enumerate(b):
                a[i + shift] = (a[i + shift] - q * bc) % p
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return a


# ----------------------------------------------------------------------
# effectively univariate inputs: primitive PRS on integer coefficient lists


def _int_coeff_list(f: MultiPoly, var: int) -> List[int]:
    """Dense integer coefficients of a primitive polynomial in one variable."""
    coeffs = [0] * (f.degree_in(var) + 1)
    for exp, c in f.terms.items():
        coeffs[exp[var]] = c
    return coeffs


def _int_content(a: Sequence[int]) -> int:
    from math import gcd
    c = 0
    for v in a:
        if v:
            c = gcd(c, abs(v))
            if c == 1:
                return 1
    return c or 1


def _int_primitive(a: List[int]) -> List[int]:
    c = _int_content(a)
    if c > 1:
        a = [v // c for v in a]
    return a


def _int_prem(f: List[int], g: List[int]) -> List[int]:
    df, dg = len(f) - 1, len(g) - 1
    lc = g[-1]
    r = f[:]
    while len(r) - 1 >= dg and r:
        lead = r[-1]
        shift = len(r) - 1 - dg
        r = [c * lc for c in r]
        for i, gc in enumerate(g):
            r[i + shift] -= lead * gc
        r.pop()
        while r and r[-1] == 0:
            r.pop()
    return r


def _univariate_int_gcd(f: MultiPoly, g: MultiPoly, var: int) -> MultiPoly:
    """Primitive PRS over Z for inputs involving a single variable."""
    fa = _int_primitive(_int_coeff_list(f, var))
    ga = _int_primitive(_int_coeff_list(g, var))
    if len(fa) < len(ga):
        fa, ga = ga, fa
    while ga:
        ra = _int_primitive(_int_prem(fa, ga))
        fa, ga = ga, ra
    if fa[-1] < 0:
        fa = [-v for v in fa]
    space = f.space
    nv = space.nvars
    terms = {}
    for e, c in enumerate(fa):
        if c:
            exp = [0] * nv
            exp[var] = e
            terms[tuple(exp)] = c
    return MultiPoly(space, terms, _trusted=True)


# ----------------------------------------------------------------------
# subresultant PRS over Q[vars]


class _UPoly:
    """Dense univariate view with MultiPoly coefficients (low to high)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: List[MultiPoly]):
        while coeffs and coeffs[-1].is_zero:
            coeffs.pop()
        self.coeffs = coeffs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self) -> MultiPoly:
        return self.coeffs[-1]

    def scaled(self, s: MultiPoly) -> "_UPoly":
        return _UPoly([c * s for c in self.coeffs])

    def quo_scalar(self, s: MultiPoly) -> "_UPoly":
        return _UPoly([c.exact_div(s) for c in self.coeffs])


def _to_upoly(f: MultiPoly, var: int) -> _UPoly:
    space = f.space
    zero = MultiPoly.zero(space)
    coeffs: List[Dict[Exponent, Coef]] = [dict() for _ in range(f.degree_in(var) + 1)]
    for exp, c in f.terms.items():
        rest = exp[:var] + (0,) + exp[var + 1:]
        coeffs[exp[var]][rest] = c
    out = [MultiPoly(space, t, _trusted=True) if t else zero for t in coeffs]
    return _UPoly(out)


def _from_upoly(space: VarSpace, var: int, f: _UPoly) -> MultiPoly:
    terms: Dict[Exponent, Coef] = {}
    for e, poly in enumerate(f.coeffs):
        for exp, c in poly.terms.items():
            terms[exp[:var] + (e,) + exp[var + 1:]] = c
    return MultiPoly(space, terms, _trusted=True)


def _pseudo_rem(f: _UPoly, g: _UPoly) -> _UPoly:
    """prem(f, g) = remainder of lc(g)^(deg f - deg g + 1) * f divided by g."""
    df, dg = f.degree, g.degree
    if dg < 0:
        raise ZeroDivisionError("pseudo-remainder by zero")
    if df < dg:
        raise ValueError("pseudo-remainder needs deg f >= deg g")
    lc_g = g.lc()
    r = list(f.coeffs)
    steps = df - dg + 1
    while r and len(r) - 1 >= dg:
        lead = r[-1]
        shift = len(r) - 1 - dg
        r = [c * lc_g for c in r]
        for i, gc in enumerate(g.coeffs):
            r[i + shift] = r[i + shift] - lead * gc
        r.pop()
        while r and r[-1].is_zero:
            r.pop()
        steps -= 1
    if steps > 0 and r:
        r = [c * (lc_g ** steps) for c in r]
    return _UPoly(r)


def _subresultant_last(f: _UPoly, g: _UPoly) -> _UPoly:
    """Last nonzero element of the subresultant PRS (deg f >= deg g >= 1).

    Brown's algorithm; all interior divisions are exact by the subresultant
    theorem, and :meth:`MultiPoly.exact_div` enforces that.
    """
    space = f.lc().space
    one = MultiPoly.const(space, 1)
    d = f.degree - g.degree
    b = one.scale((-1) ** (d + 1))
    h = _pseudo_rem(f, g).scaled(b)
    lc = g.lc()
    c = lc ** d if d else one
    c = -c
    last = g
    while not h.is_zero:
        last = h
        k = h.degree
        f, g, d = g, h, g.degree - k
        b = (-lc) * (c ** d if d != 1 else c)
        if f.degree < g.degree:
            raise FFHeightsError("internal PRS degree error")
        if g.degree == 0:
            break
        h = _pseudo_rem(f, g).quo_scalar(b)
        lc = g.lc()
        if d > 1:
            c = ((-lc) ** d).exact_div(c ** (d - 1))
        else:
            c = -lc
    return last


def _gcd_recursive(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """GCD of primitive nonzero inputs via PRS in the main variable."""
    used = sorted(set(f.variables_used()) | set(g.variables_used()))
    if not used:
        return MultiPoly.const(f.space, 1)
    var = used[-1]
    if f.degree_in(var) == 0:
        return poly_gcd(f, _content_in(g, var))
    if g.degree_in(var) == 0:
        return poly_gcd(_content_in(f, var), g)
    if len(used) == 2:
        h = _gcd_bivariate_modular(f, g, used[1], used[0])
        if h is not None:
            return h

    fu = _to_upoly(f, var)
    gu = _to_upoly(g, var)
    cont_f = poly_gcd_many([c for c in fu.coeffs if not c.is_zero])
    cont_g = poly_gcd_many([c for c in gu.coeffs if not c.is_zero])
    cont = poly_gcd(cont_f, cont_g)
    fp = fu.quo_scalar(cont_f) if not cont_f.is_constant else fu
    gp = gu.quo_scalar(cont_g) if not cont_g.is_constant else gu
    if fp.degree < gp.degree:
        fp, gp = gp, fp
    last = _subresultant_last(fp, gp)
    if last.degree == 0:
        prim = MultiPoly.const(f.space, 1)
    else:
        inner = poly_gcd_many([c for c in last.coeffs if not c.is_zero])
        prim = _from_upoly(f.space, var,
                           last.quo_scalar(inner) if not inner.is_constant
                           else last)
        prim = prim.primitive_part()
    return prim if cont.is_constant else prim * cont


def _content_in(f: MultiPoly, var: int) -> MultiPoly:
    """GCD of the coefficients of f viewed as univariate in ``var``."""
    fu = _to_upoly(f, var)
    return poly_gcd_many([c for c in fu.coeffs if not c.is_zero])


# ----------------------------------------------------------------------
# bivariate gcd by evaluation and interpolation (verified by division)


def _gcd_bivariate_modular(f: MultiPoly, g: MultiPoly, xvar: int,
                           yvar: int) -> Optional[MultiPoly]:
    """GCD of primitive bivariate inputs with positive degree in ``xvar``.

    The gcd is interpolated in ``yvar`` from univariate images whose leading
    coefficient is forced to gcd(lc_x f, lc_x g), which bounds the number of
    sample points a priori; an image of smaller x-degree discards all earlier
    (unlucky) samples.  The candidate is verified by exact division, so a
    None return (fall back to the subresultant path) is the only effect a
    bad sample sequence can have.
    """
    space = f.space
    cf = _content_in(f, xvar)
    cg = _content_in(g, xvar)
    cont = poly_gcd(cf, cg)
    fh = f.exact_div(cf) if not cf.is_constant else f
    gh = g.exact_div(cg) if not cg.is_constant else g
    fu = _to_upoly(fh, xvar)
    gu = _to_upoly(gh, xvar)
    gamma = poly_gcd(fu.lc(), gu.lc())
    dy = (gamma.degree_in(yvar)
          + min(fh.degree_in(yvar), gh.degree_in(yvar)))
    needed = dy + 1
    samples: List[Tuple[int, List[Fraction]]] = []
    best_deg: Optional[int] = None
    r = 0
    attempts = 0
    max_attempts = 4 * needed + 32
    while attempts < max_attempts:
        value = r
        r = -r if r > 0 else -r + 1  # 0, 1, -1, 2, -2, ...
        attempts += 1
        if fu.lc().partial_eval(yvar, value).is_zero:
            continue
        if gu.lc().partial_eval(yvar, value).is_zero:
            continue
        fi = _int_rat_coeffs(fh.partial_eval(yvar, value), xvar)
        gi = _int_rat_coeffs(gh.partial_eval(yvar, value), xvar)
        hi = _rat_univariate_gcd(fi, gi)
        deg = len(hi) - 1
        if deg == 0:
            # coprime images force a trivial x-part
            return cont if not cont.is_constant else MultiPoly.const(space, 1)
        if best_deg is None or deg < best_deg:
            best_deg = deg
            samples = []
        elif deg > best_deg:
            continue
        gval = Fraction(gamma.partial_eval(yvar, value).constant_value())
        scale = gval / hi[-1]
        samples.append((value, [c * scale for c in hi]))
        if len(samples) >= needed:
            cand = _interpolate_bivariate(space, samples, xvar, yvar, best_deg)
            if cand is not None:
                ccont = _content_in(cand, xvar)
                if not ccont.is_constant:
                    cand = cand.exact_div(ccont)
                cand = cand.primitive_part()
                if (fh.try_exact_div(cand) is not None
                        and gh.try_exact_div(cand) is not None):
                    return cand * cont if not cont.is_constant else cand
            return None
    return None


def _int_rat_coeffs(f: MultiPoly, xvar: int) -> List[Fraction]:
    coeffs = [Fraction(0)] * (f.degree_in(xvar) + 1)
    for exp, c in f.terms.items():
        coeffs[exp[xvar]] += Fraction(c)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _rat_univariate_gcd(a: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    """Monic gcd of univariate rational polynomials via integer PRS."""
    from math import lcm

    def to_int(c: List[Fraction]) -> List[int]:
        den = 1
        for v in c:
            den = lcm(den, v.denominator)
        return _int_primitive([int(v * den) for v in c])

    fa, ga = to_int(a), to_int(b)
    if len(fa) < len(ga):
        fa, ga = ga, fa
    while ga:
        fa, ga = ga, _int_primitive(_int_prem(fa, ga))
    lead = Fraction(fa[-1])
    return [Fraction(v) / lead for v in fa]


def _interpolate_bivariate(space: VarSpace, samples: List[Tuple[int, List[Fraction]]],
                           xvar: int, yvar: int,
                           xdeg: int) -> Optional[MultiPoly]:
    """Lagrange interpolation in ``yvar`` of imposed-lead univariate images."""
    pts = [Fraction(v) for v, _ in samples]
    n = len(samples)
    # Lagrange basis weights evaluated once
    terms: Dict[Exponent, Fraction] = {}
    nv = space.nvars
    for k, (vk, coeffs) in enumerate(samples):
        denom = Fraction(1)
        for j in range(n):
            if j != k:
                denom *= pts[k] - pts[j]
        # numerator polynomial prod_{j != k} (y - v_j) expanded incrementally
        basis = [Fraction(1)]
        for j in range(n):
            if j == k:
                continue
            nxt = [Fraction(0)] * (len(basis) + 1)
            for i, c in enumerate(basis):
                nxt[i + 1] += c
                nxt[i] -= c * pts[j]
            basis = nxt
        for i, bc in enumerate(basis):
            if bc == 0:
                continue
            w = bc / denom
            for e, cc in enumerate(coeffs):
                if cc == 0:
                    continue
                exp = [0] * nv
                exp[xvar] = e
                exp[yvar] = i
                key = tuple(exp)
                terms[key] = terms.get(key, Fraction(0)) + w * cc
    out = MultiPoly.make(space, terms)
    if out.degree_in(xvar) != xdeg:
        return None
    return out


# ----------------------------------------------------------------------
# Yun's squarefree algorithm


def _sqf_accumulate(f: MultiPoly, parts: Dict[int, MultiPoly]) -> None:
    """Accumulate squarefree factors of a primitive polynomial into parts."""
    if f.is_constant:
        return
    var = f.variables_used()[-1]
    cont = _content_in(f, var)
    if not cont.is_constant:
        f = f.exact_div(cont)
        _sqf_accumulate(cont, parts)
    df = f.derivative(var)
    g = poly_gcd(f, df)
    if g.is_constant:
        _merge_part(parts, 1, f)
        return
    c = f.exact_div(g)
    d = df.exact_div(g) - c.derivative(var)
    mult = 1
    while not c.is_constant:
        p = poly_gcd(c, d)
        if not p.is_constant:
            _merge_part(parts, mult, p)
            c = c.exact_div(p)
            d = d.exact_div(p)
        d = d - c.derivative(var)
        mult += 1


def _merge_part(parts: Dict[int, MultiPoly], mult: int,
                factor: MultiPoly) -> None:
    factor = factor.primitive_part()
    if factor.is_constant:
        return
    if mult in parts:
        parts[mult] = parts[mult] * factor
    else:
        parts[mult] = factor
