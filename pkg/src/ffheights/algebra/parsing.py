"""Parser and canonical printer for polynomial expressions.

Grammar (whitespace insignificant)::

    expr     := term (('+'|'-') term)*
    term     := factor ('*' factor)*
    factor   := base ('^' nonneg-int)?
    base     := rational | variable | '(' expr ')'
    rational := int ('/' pos-int)?
    variable := ('T'|'S') pos-int, with S0 allowed

The printer emits terms in descending graded-lex order with explicit '*',
'^' only for exponents above 1, rationals as ``p/q``, and no unary '+'.
``parse_poly(format_poly(f))`` reproduces ``f`` exactly.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import List, Optional, Tuple

from ..errors import PolyParseError
from .multipoly import MultiPoly, VarSpace

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z]\w*)|([()+\-*/^]))")


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            bad_at = len(text) - len(stripped)
            raise PolyParseError(f"unexpected character {stripped[0]!r}", bad_at)
        if m.group(1) is not None:
            tokens.append(("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), m.start(2)))
        else:
            tokens.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, space: VarSpace):
        self.text = text
        self.space = space
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> Tuple[str, str, int]:
        return self.tokens[self.i]

    def next(self) -> Tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str) -> None:
        kind, val, pos = self.next()
        if kind != "op" or val != op:
            raise PolyParseError(f"expected {op!r}", pos)

    def parse(self) -> MultiPoly:
        poly = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise PolyParseError(f"unexpected trailing input {val!r}", pos)
        return poly

    def expr(self) -> MultiPoly:
        kind, val, pos = self.peek()
        negate = False
        if kind == "op" and val in "+-":
            # leading sign: only '-' is in the grammar (no unary '+')
            if val == "+":
                raise PolyParseError("unary '+' is not allowed", pos)
            self.next()
            negate = True
        acc = self.term()
        if negate:
            acc = -acc
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "+-":
                self.next()
                rhs = self.term()
                acc = acc - rhs if val == "-" else acc + rhs
            else:
                return acc

    def term(self) -> MultiPoly:
        acc = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.next()
                acc = acc * self.factor()
            else:
                return acc

    def factor(self) -> MultiPoly:
        base = self.base()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.next()
            kind, val, pos = self.next()
            if kind != "int":
                raise PolyParseError("expected a nonnegative integer exponent", pos)
            base = base ** int(val)
        return base

    def base(self) -> MultiPoly:
        kind, val, pos = self.next()
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        if kind == "op" and val == "-":
            # e.g. "-(...)" or "-3" inside a term after '*': grammar keeps
            # unary minus at expression heads only
            raise PolyParseError("misplaced '-'", pos)
        if kind == "int":
            numerator = int(val)
            kind2, val2, _ = self.peek()
            if kind2 == "op" and val2 == "/":
                self.next()
                kindd, vald, posd = self.next()
                if kindd != "int":
                    raise PolyParseError(
                        "division by a non-constant is not allowed "
                        "(only rational literals p/q)", posd)
                denominator = int(vald)
                if denominator == 0:
                    raise PolyParseError("zero denominator", posd)
                return MultiPoly.const(self.space, Fraction(numerator, denominator))
            return MultiPoly.const(self.space, numerator)
        if kind == "name":
            return self.variable(val, pos)
        raise PolyParseError(f"expected a factor, found {val!r}", pos)

    def variable(self, name: str, pos: int) -> MultiPoly:
        try:
            index = self.space.names.index(name)
        except ValueError:
            raise PolyParseError(
                f"unknown variable {name!r} in space "
                f"({', '.join(self.space.names)})", pos) from None
        var = MultiPoly.variable(self.space, index)
        kind, val, posd = self.peek()
        if kind == "op" and val == "/":
            raise PolyParseError(
                "division by a non-constant is not allowed "
                "(only rational literals p/q)", posd)
        return var


def parse_poly(text: str, space: VarSpace) -> MultiPoly:
    """Parse ``text`` into a canonical sparse polynomial over ``space``."""
    return _Parser(text, space).parse()


def _monomial_str(space: VarSpace, exp) -> str:
    parts = []
    for name, e in zip(space.names, exp):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_poly(poly: MultiPoly) -> str:
    """Canonical text: descending graded-lex, explicit '*', no unary '+'."""
    if poly.is_zero:
        return "0"
    chunks: List[str] = []
    for exp, coef in poly.sorted_terms():
        c = Fraction(coef)
        mono = _monomial_str(poly.space, exp)
        mag = abs(c)
        if mono and mag == 1:
            body = mono
        elif mono:
            body = f"{_frac_str(mag)}*{mono}"
        else:
            body = _frac_str(mag)
        if not chunks:
            chunks.append(body if c > 0 else f"-{body}")
        else:
            chunks.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(chunks)


def _frac_str(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
