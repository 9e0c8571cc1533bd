"""Exact sparse multivariate polynomial arithmetic over the rationals.

A polynomial is a dictionary mapping exponent tuples to nonzero rational
coefficients.  Coefficients are stored as plain ``int`` whenever the value is
integral and as ``fractions.Fraction`` otherwise; both are exact, and the int
fast path keeps the heavy inner loops (multiplication of large curve
coordinates) close to native big-integer speed.

Every polynomial is tagged with a :class:`VarSpace` naming its variables and
recording whether they are affine coordinates (``T1 .. Tn``, or a chart
variable on a parameter line) or homogeneous coordinates (``S0 .. Sn``, or
``u, v`` on a parameter line).  The tag is purely bookkeeping for degree
conventions and printing; arithmetic only requires both operands to carry the
same tag.

Term order is graded lexicographic throughout: monomials compare first by
total degree, then lexicographically on the exponent tuple with the first
variable strongest.  The leading term, content normalization and the printer
all use this order, so equal polynomials always have identical canonical
form.

Values are immutable after construction.  Nothing here mutates a published
term map, every operation returns a fresh polynomial, and instances hash by
value, so they are safe to share across threads and to use as dictionary
keys.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union

from ..errors import FFHeightsError, NotDivisibleError

Exponent = Tuple[int, ...]
Coef = Union[int, Fraction]
Scalar = Union[int, Fraction]

#: Sampling bound for probabilistic identity checking: coordinates are drawn
#: uniformly from the integers in [-IDENTITY_SAMPLE_BOUND, IDENTITY_SAMPLE_BOUND].
IDENTITY_SAMPLE_BOUND = 10**6

#: Default seed so that library-internal sampling is reproducible run to run.
DEFAULT_SEED = 0x5EED


def _coef(value: Scalar) -> Coef:
    """Coerce a scalar to the canonical coefficient representation."""
    if type(value) is int:
        return value
    value = Fraction(value)
    return value.numerator if value.denominator == 1 else value


@dataclass(frozen=True)
class VarSpace:
    """Variable-space tag: the named coordinates a polynomial lives in.

    ``kind`` is ``"affine"`` for function-field coordinates (total degree is
    the honest degree) or ``"proj"`` for homogeneous coordinates.
    """

    kind: str
    names: Tuple[str, ...]

    def __post_init__(self):
        if self.kind not in ("affine", "proj"):
            raise ValueError(f"unknown variable-space kind {self.kind!r}")
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")

    @property
    def nvars(self) -> int:
        return len(self.names)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"VarSpace({self.kind}, {'/'.join(self.names)})"


def t_space(n: int) -> VarSpace:
    """Affine coordinates T1 .. Tn of the function field Q(T1,...,Tn)."""
    if n < 1:
        raise ValueError("need at least one variable")
    return VarSpace("affine", tuple(f"T{i}" for i in range(1, n + 1)))


def s_space(n: int) -> VarSpace:
    """Homogeneous coordinates S0 .. Sn of the ambient projective space."""
    if n < 1:
        raise ValueError("need at least one variable")
    return VarSpace("proj", tuple(f"S{i}" for i in range(n + 1)))


def param_space(k: int) -> VarSpace:
    """Homogeneous parameter coordinates for a parametrized hypersurface.

    ``k`` is the number of homogeneous parameters (2 for a parametrized curve
    in the plane, printed as ``u, v``).
    """
    if k == 2:
        return VarSpace("proj", ("u", "v"))
    return VarSpace("proj", tuple(f"u{i}" for i in range(1, k + 1)))


def chart_space(proj: VarSpace) -> VarSpace:
    """Affine chart obtained by setting the first homogeneous variable to 1.

    The chart of ``S0..Sn`` is ``T1..Tn``; the chart of ``u, v`` is the single
    parameter ``s``; other parameter spaces get generic ``w`` names.
    """
    if proj.kind != "proj":
        raise ValueError("chart_space expects homogeneous coordinates")
    if proj.names[0] == "S0":
        return t_space(proj.nvars - 1)
    if proj.names == ("u", "v"):
        return VarSpace("affine", ("s",))
    return VarSpace("affine", tuple(f"w{i}" for i in range(1, proj.nvars)))


def proj_space_of(affine: VarSpace) -> VarSpace:
    """Inverse of :func:`chart_space`: the homogeneous partner of a chart."""
    if affine.kind != "affine":
        raise ValueError("proj_space_of expects affine coordinates")
    if affine.names[0] == "T1":
        return s_space(affine.nvars)
    if affine.names == ("s",):
        return param_space(2)
    return VarSpace("proj", ("w0",) + affine.names)


def _grlex_key(exp: Exponent) -> Tuple[int, Exponent]:
    return (sum(exp), exp)


class MultiPoly:
    """Immutable sparse polynomial over Q in a fixed variable space."""

    __slots__ = ("space", "terms", "_hash")

    def __init__(self, space: VarSpace, terms: Dict[Exponent, Coef],
                 _trusted: bool = False):
        """Build a polynomial from a term map.

        External callers should prefer :meth:`make`, the named constructors,
        or the parser; this constructor trusts ``terms`` to be canonical when
        ``_trusted`` is set and otherwise canonicalizes a copy.
        """
        if not _trusted:
            nv = space.nvars
            clean: Dict[Exponent, Coef] = {}
            for exp, c in terms.items():
                exp = tuple(exp)
                if len(exp) != nv:
                    raise ValueError(
                        f"exponent {exp} does not match {nv}-variable space")
                if any(e < 0 for e in exp):
                    raise ValueError(f"negative exponent in {exp}")
                c = _coef(c)
                if c:
                    prev = clean.get(exp)
                    if prev is None:
                        clean[exp] = c
                    else:
                        s = prev + c
                        if s:
                            clean[exp] = _coef(s)
                        else:
                            del clean[exp]
            terms = clean
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *args):  # immutability by contract
        raise AttributeError("MultiPoly is immutable")

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def make(cls, space: VarSpace, terms: Mapping[Exponent, Scalar]) -> "MultiPoly":
        return cls(space, dict(terms))

    @classmethod
    def zero(cls, space: VarSpace) -> "MultiPoly":
        return cls(space, {}, _trusted=True)

    @classmethod
    def const(cls, space: VarSpace, value: Scalar) -> "MultiPoly":
        c = _coef(value)
        if not c:
            return cls.zero(space)
        return cls(space, {(0,) * space.nvars: c}, _trusted=True)

    @classmethod
    def variable(cls, space: VarSpace, index: int) -> "MultiPoly":
        if not 0 <= index < space.nvars:
            raise ValueError(f"variable index {index} out of range")
        exp = [0] * space.nvars
        exp[index] = 1
        return cls(space, {tuple(exp): 1}, _trusted=True)

    # ------------------------------------------------------------------
    # structure queries

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        return all(not any(exp) for exp in self.terms)

    def constant_value(self) -> Fraction:
        """The value of a constant polynomial (0 for the zero polynomial)."""
        if not self.is_constant:
            raise ValueError("polynomial is not constant")
        if not self.terms:
            return Fraction(0)
        return Fraction(next(iter(self.terms.values())))

    def total_degree(self) -> int:
        """Total degree; the zero polynomial reports -1."""
        if not self.terms:
            return -1
        return max(sum(exp) for exp in self.terms)

    def degree_in(self, index: int) -> int:
        if not self.terms:
            return -1
        return max(exp[index] for exp in self.terms)

    def is_homogeneous(self) -> bool:
        if not self.terms:
            return True
        degrees = {sum(exp) for exp in self.terms}
        return len(degrees) == 1

    def leading_term(self) -> Tuple[Exponent, Coef]:
        """Largest term in graded-lex order."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        exp = max(self.terms, key=_grlex_key)
        return exp, self.terms[exp]

    def sorted_terms(self) -> Sequence[Tuple[Exponent, Coef]]:
        """Terms in descending graded-lex order (the canonical print order)."""
        return [(e, self.terms[e]) for e in
                sorted(self.terms, key=_grlex_key, reverse=True)]

    def variables_used(self) -> Tuple[int, ...]:
        """Indices of variables that occur with positive exponent."""
        used = set()
        for exp in self.terms:
            for i, e in enumerate(exp):
                if e:
                    used.add(i)
        return tuple(sorted(used))

    # ------------------------------------------------------------------
    # ring operations

    def _check_space(self, other: "MultiPoly") -> None:
        if self.space != other.space:
            raise FFHeightsError(
                f"variable-space mismatch: {self.space} vs {other.space}")

    def __add__(self, other: Union["MultiPoly", Scalar]) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            other = MultiPoly.const(self.space, other)
        self._check_space(other)
        if not self.terms:
            return other
        if not other.terms:
            return self
        out = dict(self.terms)
        for exp, c in other.terms.items():
            s = out.get(exp, 0) + c
            if s:
                out[exp] = _coef(s)
            else:
                out.pop(exp, None)
        return MultiPoly(self.space, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.space, {e: -c for e, c in self.terms.items()},
                         _trusted=True)

    def __sub__(self, other: Union["MultiPoly", Scalar]) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            other = MultiPoly.const(self.space, other)
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "MultiPoly":
        return MultiPoly.const(self.space, other) - self

    def __mul__(self, other: Union["MultiPoly", Scalar]) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        self._check_space(other)
        a, b = self.terms, other.terms
        if not a or not b:
            return MultiPoly.zero(self.space)
        if len(a) > len(b):
            a, b = b, a
        out: Dict[Exponent, Coef] = {}
        get = out.get
        for ea, ca in a.items():
            for eb, cb in b.items():
                exp = tuple(map(int.__add__, ea, eb))
                s = get(exp, 0) + ca * cb
                if s:
                    out[exp] = s
                else:
                    out.pop(exp, None)
        # re-normalize Fractions that collapsed to integral values
        for exp, c in out.items():
            if type(c) is not int:
                out[exp] = _coef(c)
        return MultiPoly(self.space, out, _trusted=True)

    __rmul__ = __mul__

    def scale(self, value: Scalar) -> "MultiPoly":
        c = _coef(value)
        if not c:
            return MultiPoly.zero(self.space)
        if c == 1:
            return self
        return MultiPoly(self.space,
                         {e: _coef(k * c) for e, k in self.terms.items()},
                         _trusted=True)

    def __pow__(self, n: int) -> "MultiPoly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = MultiPoly.const(self.space, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiPoly):
            if isinstance(other, (int, Fraction)):
                return self == MultiPoly.const(self.space, other)
            return NotImplemented
        return self.space == other.space and self.terms == other.terms

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.space, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        from .parsing import format_poly
        return format_poly(self)

    # ------------------------------------------------------------------
    # content and normalization

    def content(self) -> Fraction:
        """Signed rational content: ``self / self.content()`` is integer
        primitive with positive leading coefficient.  Zero has content 0."""
        if not self.terms:
            return Fraction(0)
        from math import gcd, lcm
        num = 0
        den = 1
        for c in self.terms.values():
            if type(c) is int:
                num = gcd(num, abs(c))
            else:
                num = gcd(num, abs(c.numerator))
                den = lcm(den, c.denominator)
        cont = Fraction(num, den)
        _, lead = self.leading_term()
        if lead < 0:
            cont = -cont
        return cont

    def primitive_part(self) -> "MultiPoly":
        if not self.terms:
            return self
        return self.scale(1 / self.content())

    # ------------------------------------------------------------------
    # calculus / evaluation / substitution

    def derivative(self, index: int) -> "MultiPoly":
        out: Dict[Exponent, Coef] = {}
        for exp, c in self.terms.items():
            e = exp[index]
            if e:
                nexp = exp[:index] + (e - 1,) + exp[index + 1:]
                s = out.get(nexp, 0) + c * e
                if s:
                    out[nexp] = _coef(s)
                else:
                    out.pop(nexp, None)
        return MultiPoly(self.space, out, _trusted=True)

    def evaluate(self, values: Sequence[Scalar]) -> Fraction:
        """Exact evaluation at a rational point (one value per variable)."""
        if len(values) != self.space.nvars:
            raise ValueError("wrong number of values")
        vals = [Fraction(v) for v in values]
        total = Fraction(0)
        cache: Dict[Tuple[int, int], Fraction] = {}
        for exp, c in self.terms.items():
            term = Fraction(c)
            for i, e in enumerate(exp):
                if e:
                    key = (i, e)
                    p = cache.get(key)
                    if p is None:
                        p = vals[i] ** e
                        cache[key] = p
                    term *= p
            total += term
        return total

    def partial_eval(self, var: int, value: Scalar) -> "MultiPoly":
        """Evaluate one variable at a rational value, keeping the others."""
        v = _coef(value)
        out: Dict[Exponent, Coef] = {}
        cache: Dict[int, Coef] = {0: 1}
        for exp, c in self.terms.items():
            e = exp[var]
            if e:
                p = cache.get(e)
                if p is None:
                    p = v ** e
                    cache[e] = p
                c = c * p
                if not c:
                    continue
            nexp = exp[:var] + (0,) + exp[var + 1:]
            s = out.get(nexp, 0) + c
            if s:
                out[nexp] = _coef(s)
            else:
                out.pop(nexp, None)
        return MultiPoly(self.space, out, _trusted=True)

    def substitute(self, images: Sequence["MultiPoly"]) -> "MultiPoly":
        """Ring map sending variable i to ``images[i]``.

        All images must share one variable space, which becomes the space of
        the result.  Powers of each image are cached, so substituting into a
        high-degree polynomial costs roughly one multiplication per term.
        """
        if len(images) != self.space.nvars:
            raise FFHeightsError(
                f"substitute: expected {self.space.nvars} images, "
                f"got {len(images)}")
        if not images:
            raise FFHeightsError("substitute: empty image list")
        target = images[0].space
        for im in images:
            if im.space != target:
                raise FFHeightsError("substitute: images in mixed spaces")
        if not self.terms:
            return MultiPoly.zero(target)
        one = MultiPoly.const(target, 1)
        powers: Dict[Tuple[int, int], MultiPoly] = {}

        def power(i: int, e: int) -> MultiPoly:
            if e == 0:
                return one
            key = (i, e)
            p = powers.get(key)
            if p is None:
                p = power(i, e - 1) * images[i]
                powers[key] = p
            return p

        acc = MultiPoly.zero(target)
        for exp, c in self.terms.items():
            term = one.scale(c)
            for i, e in enumerate(exp):
                if e:
                    term = term * power(i, e)
            acc = acc + term
        return acc

    # ------------------------------------------------------------------
    # homogenization

    def homogenize(self, target_degree: int,
                   proj: Optional[VarSpace] = None) -> "MultiPoly":
        """Homogenize to exact degree ``target_degree`` in the partner
        homogeneous space, padding with powers of the first variable.

        A polynomial of total degree d in T1..Tn becomes a degree
        ``target_degree`` form in S0..Sn with T_i replaced by S_i and each
        term padded by S0 to the target degree.  Requires
        ``target_degree >= total_degree``.
        """
        if self.space.kind != "affine":
            raise FFHeightsError("homogenize expects an affine polynomial")
        if proj is None:
            proj = proj_space_of(self.space)
        if proj.nvars != self.space.nvars + 1:
            raise FFHeightsError("homogeneous partner has wrong dimension")
        d = self.total_degree()
        if target_degree < d:
            raise FFHeightsError(
                f"target degree {target_degree} below total degree {d}")
        out = {(target_degree - sum(exp),) + exp: c
               for exp, c in self.terms.items()}
        return MultiPoly(proj, out, _trusted=True)

    def dehomogenize(self, affine: Optional[VarSpace] = None) -> "MultiPoly":
        """Set the first homogeneous variable to 1 (the standard chart)."""
        if self.space.kind != "proj":
            raise FFHeightsError("dehomogenize expects a homogeneous polynomial")
        if affine is None:
            affine = chart_space(self.space)
        out: Dict[Exponent, Coef] = {}
        for exp, c in self.terms.items():
            nexp = exp[1:]
            s = out.get(nexp, 0) + c
            if s:
                out[nexp] = _coef(s)
            else:
                out.pop(nexp, None)
        return MultiPoly(affine, out, _trusted=True)

    # ------------------------------------------------------------------
    # exact division

    def exact_div(self, divisor: "MultiPoly") -> "MultiPoly":
        """Exact quotient; raises :class:`NotDivisibleError` otherwise."""
        q = self.try_exact_div(divisor)
        if q is None:
            raise NotDivisibleError("polynomial division is not exact")
        return q

    def try_exact_div(self, divisor: "MultiPoly") -> Optional["MultiPoly"]:
        self._check_space(divisor)
        if divisor.is_zero:
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero:
            return self
        if divisor.is_constant:
            return self.scale(Fraction(1) / divisor.constant_value())
        dexp, dcoef = divisor.leading_term()
        rem = dict(self.terms)
        out: Dict[Exponent, Coef] = {}
        # cancel leading terms in graded-lex order; degree strictly drops
        while rem:
            exp = max(rem, key=_grlex_key)
            c = rem[exp]
            qexp = tuple(map(int.__sub__, exp, dexp))
            if any(e < 0 for e in qexp):
                return None
            qc = _coef(Fraction(c) / Fraction(dcoef))
            out[qexp] = qc
            for e2, c2 in divisor.terms.items():
                t = tuple(map(int.__add__, qexp, e2))
                s = rem.get(t, 0) - qc * c2
                if s:
                    rem[t] = _coef(s)
                else:
                    rem.pop(t, None)
        return MultiPoly(self.space, out, _trusted=True)

    def divides(self, other: "MultiPoly") -> bool:
        return other.try_exact_div(self) is not None


def multiplicity_of(f: MultiPoly, factor: MultiPoly, cap: int = 10**6) -> int:
    """Largest e with factor**e dividing f exactly (f nonzero)."""
    if f.is_zero:
        raise ValueError("multiplicity in the zero polynomial is undefined")
    if factor.is_constant:
        raise ValueError("multiplicity of a constant factor is undefined")
    count = 0
    while count < cap:
        q = f.try_exact_div(factor)
        if q is None:
            return count
        f = q
        count += 1
    raise FFHeightsError("multiplicity cap exceeded")


# ----------------------------------------------------------------------
# probabilistic-exact identity checking


def identity_witness(f: MultiPoly, g: MultiPoly, trials: int = 20,
                     rng: Optional[random.Random] = None
                     ) -> Optional[Tuple[int, ...]]:
    """Search for a point where f and g evaluate differently.

    Returns an integer witness tuple, or None if all sampled points agree
    (or the polynomials are syntactically equal).  A returned witness is a
    certificate of inequality; None is correct up to the usual
    Schwartz-Zippel failure probability, negligible at these degrees with
    coordinates from [-10^6, 10^6].
    """
    if f.space != g.space:
        raise FFHeightsError("identity check across different variable spaces")
    if f.terms == g.terms:
        return None
    if rng is None:
        rng = random.Random(DEFAULT_SEED)
    n = f.space.nvars
    for _ in range(trials):
        point = tuple(rng.randint(-IDENTITY_SAMPLE_BOUND, IDENTITY_SAMPLE_BOUND)
                      for _ in range(n))
        if f.evaluate(point) != g.evaluate(point):
            return point
    return None


def random_identity_check(f: MultiPoly, g: MultiPoly, trials: int = 20,
                          rng: Optional[random.Random] = None) -> bool:
    """True iff f = g syntactically or at ``trials`` random sample points."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    return identity_witness(f, g, trials=trials, rng=rng) is None
