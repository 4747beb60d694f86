"""Text grammar for polynomials, 1-forms and vector fields.

    expr    := term (('+' | '-') term)*
    term    := unary ('*' unary)*
    unary   := ('-' | '+') unary | power
    power   := primary ('^' INT)?
    primary := INT ('/' INT)? | NAME | '(' expr ')'

There is no implicit multiplication and ``^`` binds tightest, so ``-x^2`` is
``-(x^2)``.  Forms use the extra names ``dx dy dz`` and fields ``Dx Dy Dz``;
every term must be linear in them.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from ..errors import ParseError
from .poly import MultiPoly

POLY_VARS = ("x", "y", "z", "t", "u", "v")
_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def _tokenize(text: str) -> List[Tuple[str, str]]:
    out = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        num, name, op = m.groups()
        if num is not None:
            out.append(("num", num))
        elif name is not None:
            out.append(("name", name))
        else:
            if op not in "+-*^/()":
                raise ParseError(f"unexpected character {op!r} at {m.start(3)}")
            out.append(("op", op))
        pos = m.end()
    out.append(("end", ""))
    return out


class _Parser:
    def __init__(self, text: str, vars: Sequence[str]):
        self.toks = _tokenize(text)
        self.i = 0
        self.vars = tuple(vars)
        self.text = text

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind, val=None):
        t = self.take()
        if t[0] != kind or (val is not None and t[1] != val):
            raise ParseError(f"expected {val or kind}, got {t[1] or 'end of input'!r} in {self.text!r}")
        return t

    def parse(self) -> MultiPoly:
        e = self.expr()
        if self.peek()[0] != "end":
            raise ParseError(f"trailing input {self.peek()[1]!r} in {self.text!r}")
        return e

    def expr(self):
        acc = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self):
        acc = self.unary()
        while self.peek() == ("op", "*"):
            self.take()
            acc = acc * self.unary()
        return acc

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.primary()
        if self.peek() == ("op", "^"):
            self.take()
            k = int(self.expect("num")[1])
            return base ** k
        return base

    def primary(self):
        kind, val = self.take()
        if kind == "num":
            if self.peek() == ("op", "/"):
                self.take()
                den = int(self.expect("num")[1])
                if den == 0:
                    raise ParseError("zero denominator")
                return MultiPoly.const(Fraction(int(val), den), self.vars)
            return MultiPoly.const(int(val), self.vars)
        if kind == "name":
            if val not in self.vars:
                raise ParseError(f"unknown variable {val!r}; allowed {self.vars}")
            return MultiPoly.var(val, self.vars)
        if (kind, val) == ("op", "("):
            e = self.expr()
            self.expect("op", ")")
            return e
        raise ParseError(f"unexpected {val or 'end of input'!r} in {self.text!r}")


def parse_poly(text: str, vars: Sequence[str] = ("x", "y", "z")) -> MultiPoly:
    """Parse a polynomial; variables outside ``vars`` are rejected."""
    return _Parser(text, vars).parse()


def _split_linear(text: str, vars: Sequence[str], diffs: Sequence[str]) -> Dict[str, MultiPoly]:
    vars = tuple(vars)
    allv = vars + tuple(diffs)
    p = _Parser(text, allv).parse()
    n = len(vars)
    parts = {d: {} for d in diffs}
    for e, c in p.terms.items():
        dpart = e[n:]
        if sum(dpart) != 1:
            raise ParseError(f"term is not linear in {tuple(diffs)}: {text!r}")
        d = diffs[dpart.index(1)]
        parts[d][e[:n]] = c
    return {d: MultiPoly(vars, t) for d, t in parts.items()}


def _strip_prefix(text: str, prefix: str) -> str:
    t = text.strip()
    if t.lower().startswith(prefix + ":"):
        return t[len(prefix) + 1:]
    return t


def parse_form(text: str, vars: Sequence[str] = ("x", "y", "z")) -> Tuple[MultiPoly, ...]:
    """Coefficients of ``d<var>`` for each variable, in order."""
    text = _strip_prefix(text, "form")
    diffs = tuple("d" + v for v in vars)
    parts = _split_linear(text, vars, diffs)
    return tuple(parts[d] for d in diffs)


def parse_field(text: str, vars: Sequence[str] = ("x", "y", "z")) -> Tuple[MultiPoly, ...]:
    """Components along ``D<var>`` for each variable, in order."""
    text = _strip_prefix(text, "field")
    diffs = tuple("D" + v for v in vars)
    parts = _split_linear(text, vars, diffs)
    return tuple(parts[d] for d in diffs)


def form_text(coeffs: Sequence[MultiPoly], vars: Sequence[str]) -> str:
    """Inverse of :func:`parse_form` on canonical output."""
    pieces = []
    for c, v in zip(coeffs, vars):
        if c:
            pieces.append(f"({c})*d{v}")
    return " + ".join(pieces) if pieces else "0"


def field_text(comps: Sequence[MultiPoly], vars: Sequence[str]) -> str:
    pieces = []
    for c, v in zip(comps, vars):
        if c:
            pieces.append(f"({c})*D{v}")
    return " + ".join(pieces) if pieces else "0"
