"""Sparse multivariate polynomials with exact rational coefficients.

Coefficients are Python ``int`` or :class:`fractions.Fraction`; a Fraction with
denominator 1 is always stored as ``int``, which keeps the common all-integer
case on the fast path.  Exponent vectors are tuples aligned with ``vars``.

The canonical term order is graded lexicographic with the first variable the
most significant (``x > y > z``), so ``x^7*y`` prints before ``x^7*z`` and
before ``x^6*y^2``.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Dict, Iterable, Mapping, Sequence, Tuple, Union

Rational = Union[int, Fraction]
Exp = Tuple[int, ...]


def rat(c) -> Rational:
    """Coerce ``c`` to the canonical rational representation."""
    if isinstance(c, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, str):
        return rat(Fraction(c))
    if hasattr(c, "numerator") and hasattr(c, "denominator"):
        return rat(Fraction(int(c.numerator), int(c.denominator)))
    raise TypeError(f"cannot use {c!r} as an exact coefficient")


def fmt_rat(c: Rational) -> str:
    c = rat(c)
    if isinstance(c, int):
        return str(c)
    return f"{c.numerator}/{c.denominator}"


def _grlex_key(e: Exp):
    return (sum(e), e)


class MultiPoly:
    """Immutable sparse polynomial over Q in an ordered tuple of variables."""

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars: Sequence[str], terms: Mapping[Exp, Rational] | None = None, *, _trusted=False):
        self.vars = tuple(vars)
        if _trusted:
            self.terms = terms
        else:
            n = len(self.vars)
            clean = {}
            for e, c in (terms or {}).items():
                e = tuple(e)
                if len(e) != n:
                    raise ValueError(f"exponent {e} does not match variables {self.vars}")
                c = rat(c)
                if c:
                    clean[e] = c
            self.terms = clean
        self._hash = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, vars):
        return cls(vars, {}, _trusted=True)

    @classmethod
    def const(cls, c, vars):
        c = rat(c)
        if not c:
            return cls.zero(vars)
        return cls(vars, {(0,) * len(tuple(vars)): c}, _trusted=True)

    @classmethod
    def var(cls, name: str, vars):
        vars = tuple(vars)
        e = [0] * len(vars)
        e[vars.index(name)] = 1
        return cls(vars, {tuple(e): 1}, _trusted=True)

    @classmethod
    def gens(cls, vars):
        return tuple(cls.var(v, vars) for v in vars)

    @classmethod
    def monomial(cls, exp, c, vars):
        return cls(vars, {tuple(exp): c})

    # -- basic protocol ---------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_term(self) -> Rational:
        return self.terms.get((0,) * len(self.vars), 0)

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.vars == other.vars and self.terms == other.terms
        try:
            c = rat(other)
        except TypeError:
            return NotImplemented
        return self.is_constant() and self.constant_term() == c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"MultiPoly({str(self)!r}, vars={self.vars})"

    def __str__(self):
        return to_text(self)

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.vars != self.vars:
                raise ValueError(f"variable mismatch: {self.vars} vs {other.vars}")
            return other
        return MultiPoly.const(other, self.vars)

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        if len(other.terms) > len(self.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        out = dict(a)
        for e, c in b.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = rat(s) if isinstance(s, Fraction) else s
            else:
                out.pop(e, None)
        return MultiPoly(self.vars, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.vars, {e: -c for e, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "MultiPoly":
        c = rat(c)
        if not c:
            return MultiPoly.zero(self.vars)
        if c == 1:
            return self
        if isinstance(c, int):
            return MultiPoly(self.vars, {e: v * c for e, v in self.terms.items()}, _trusted=True)
        return MultiPoly(self.vars, {e: rat(v * c) for e, v in self.terms.items()}, _trusted=True)

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        other = self._coerce(other)
        if not self.terms or not other.terms:
            return MultiPoly.zero(self.vars)
        out: Dict[Exp, Rational] = {}
        get = out.get
        n = len(self.vars)
        b_items = list(other.terms.items())
        if n == 2:
            for (a0, a1), ca in self.terms.items():
                for (b0, b1), cb in b_items:
                    k = (a0 + b0, a1 + b1)
                    out[k] = get(k, 0) + ca * cb
        elif n == 3:
            for (a0, a1, a2), ca in self.terms.items():
                for (b0, b1, b2), cb in b_items:
                    k = (a0 + b0, a1 + b1, a2 + b2)
                    out[k] = get(k, 0) + ca * cb
        else:
            for ea, ca in self.terms.items():
                for eb, cb in b_items:
                    k = tuple(i + j for i, j in zip(ea, eb))
                    out[k] = get(k, 0) + ca * cb
        return MultiPoly(self.vars, {e: rat(c) for e, c in out.items() if c}, _trusted=True)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        result = MultiPoly.const(1, self.vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, c):
        if isinstance(c, MultiPoly):
            q = exact_quotient(self, c)
            if q is None:
                raise ArithmeticError("polynomial division is not exact")
            return q
        return self.scale(Fraction(1) / rat(c))

    # -- degrees and parts --------------------------------------------------
    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def order(self) -> int:
        """Lowest total degree of a term (vanishing order at the origin); -1 for zero."""
        if not self.terms:
            return -1
        return min(sum(e) for e in self.terms)

    def degree(self, var: str) -> int:
        if not self.terms:
            return -1
        i = self.vars.index(var)
        return max(e[i] for e in self.terms)

    def min_degree(self, var: str) -> int:
        if not self.terms:
            return -1
        i = self.vars.index(var)
        return min(e[i] for e in self.terms)

    def homogeneous_part(self, k: int) -> "MultiPoly":
        return MultiPoly(self.vars, {e: c for e, c in self.terms.items() if sum(e) == k}, _trusted=True)

    def lowest_part(self) -> "MultiPoly":
        return self.homogeneous_part(self.order())

    def truncate(self, k: int) -> "MultiPoly":
        """Drop every term of total degree >= k."""
        return MultiPoly(self.vars, {e: c for e, c in self.terms.items() if sum(e) < k}, _trusted=True)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def sorted_terms(self):
        """Terms in descending graded-lex order."""
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def leading_term(self):
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def leading_coefficient(self) -> Rational:
        return self.leading_term()[1] if self.terms else 0

    def used_vars(self) -> Tuple[str, ...]:
        used = set()
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used.add(i)
        return tuple(v for i, v in enumerate(self.vars) if i in used)

    # -- calculus and substitution -----------------------------------------
    def diff(self, var: str) -> "MultiPoly":
        i = self.vars.index(var)
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                ne = e[:i] + (k - 1,) + e[i + 1:]
                out[ne] = c * k
        return MultiPoly(self.vars, out, _trusted=True)

    def coeffs_in(self, var: str) -> Dict[int, "MultiPoly"]:
        """Split as sum_k c_k * var^k; each c_k keeps the full variable tuple."""
        i = self.vars.index(var)
        parts: Dict[int, Dict[Exp, Rational]] = {}
        for e, c in self.terms.items():
            k = e[i]
            parts.setdefault(k, {})[e[:i] + (0,) + e[i + 1:]] = c
        return {k: MultiPoly(self.vars, t, _trusted=True) for k, t in parts.items()}

    def with_vars(self, new_vars: Sequence[str]) -> "MultiPoly":
        """Re-embed into another variable tuple; every used variable must survive."""
        new_vars = tuple(new_vars)
        if new_vars == self.vars:
            return self
        idx = []
        for v in self.vars:
            idx.append(new_vars.index(v) if v in new_vars else None)
        out = {}
        n = len(new_vars)
        for e, c in self.terms.items():
            ne = [0] * n
            for k, j in zip(e, idx):
                if k:
                    if j is None:
                        raise ValueError(f"variable dropped while still used: {self.vars} -> {new_vars}")
                    ne[j] = k
            out[tuple(ne)] = c
        return MultiPoly(new_vars, out, _trusted=True)

    def rename(self, mapping: Mapping[str, str]) -> "MultiPoly":
        return MultiPoly(tuple(mapping.get(v, v) for v in self.vars), self.terms, _trusted=True)

    def substitute(self, bindings: Mapping[str, object], target_vars: Sequence[str] | None = None) -> "MultiPoly":
        """Simultaneous substitution of variables by polynomials or constants."""
        for k in bindings:
            if k not in self.vars:
                raise ValueError(f"{k!r} is not a variable of {self.vars}")
        if target_vars is None:
            target_vars = None
            for v in bindings.values():
                if isinstance(v, MultiPoly):
                    target_vars = v.vars
                    break
            if target_vars is None:
                target_vars = self.vars
        target_vars = tuple(target_vars)
        images = []
        for v in self.vars:
            if v in bindings:
                b = bindings[v]
                if isinstance(b, MultiPoly):
                    if b.vars != target_vars:
                        b = b.with_vars(target_vars)
                else:
                    b = MultiPoly.const(b, target_vars)
                images.append(b)
            else:
                images.append(MultiPoly.var(v, target_vars))
        return substitute_images(self, images, target_vars)

    def __call__(self, *values):
        """Evaluate at a point (all variables bound to scalars)."""
        if len(values) != len(self.vars):
            raise ValueError("wrong number of values")
        vals = [rat(v) for v in values]
        total = 0
        for e, c in self.terms.items():
            t = c
            for v, k in zip(vals, e):
                if k:
                    t = t * v ** k
            total += t
        return rat(total)

    # -- normalisation ------------------------------------------------------
    def content(self) -> Rational:
        """Positive rational c with self/c integral and primitive; 0 for zero."""
        if not self.terms:
            return 0
        g = 0
        den = 1
        for c in self.terms.values():
            if isinstance(c, Fraction):
                g = gcd(g, c.numerator)
                den = lcm(den, c.denominator)
            else:
                g = gcd(g, c)
        return rat(Fraction(g, den))

    def primitive(self) -> "MultiPoly":
        """Integer coprime coefficients with positive leading coefficient (grlex)."""
        if not self.terms:
            return self
        c = self.content()
        if self.leading_coefficient() < 0:
            c = -c
        if c == 1:
            return self
        return self.scale(Fraction(1) / c)

    def monic(self) -> "MultiPoly":
        if not self.terms:
            return self
        return self.scale(Fraction(1) / self.leading_coefficient())


def substitute_images(f: MultiPoly, images: Sequence[MultiPoly], target_vars) -> MultiPoly:
    """Evaluate ``f`` with its i-th variable replaced by ``images[i]``."""
    target_vars = tuple(target_vars)
    if not f.terms:
        return MultiPoly.zero(target_vars)
    n = len(f.vars)
    maxdeg = [0] * n
    for e in f.terms:
        for i, k in enumerate(e):
            if k > maxdeg[i]:
                maxdeg[i] = k
    powers = []
    for i in range(n):
        p = [MultiPoly.const(1, target_vars)]
        for _ in range(maxdeg[i]):
            p.append(p[-1] * images[i])
        powers.append(p)
    # Products of the non-leading powers are shared between terms.
    acc: Dict[Exp, Rational] = {}
    cache = {}
    one = MultiPoly.const(1, target_vars)
    for e, c in f.terms.items():
        rest = e[1:]
        m = cache.get(rest)
        if m is None:
            m = one
            for i in range(1, n):
                if e[i]:
                    m = m * powers[i][e[i]]
            cache[rest] = m
        term = m * powers[0][e[0]] if e[0] else m
        for te, tc in term.terms.items():
            acc[te] = acc.get(te, 0) + c * tc
    return MultiPoly(target_vars, {e: rat(c) for e, c in acc.items() if c}, _trusted=True)


def _divides(a: Exp, b: Exp) -> bool:
    return all(i <= j for i, j in zip(a, b))


def divide(f: MultiPoly, g: MultiPoly):
    """Multivariate division by a single divisor: returns (q, r) with f = q*g + r."""
    if not g.terms:
        raise ZeroDivisionError("division by zero polynomial")
    if f.vars != g.vars:
        raise ValueError("variable mismatch")
    lt_e, lt_c = g.leading_term()
    g_rest = [(e, c) for e, c in g.terms.items() if e != lt_e]
    inv = Fraction(1) / Fraction(lt_c) if not (isinstance(lt_c, int) and lt_c in (1, -1)) else lt_c
    rem: Dict[Exp, Rational] = dict(f.terms)
    q: Dict[Exp, Rational] = {}
    r: Dict[Exp, Rational] = {}
    while rem:
        e = max(rem, key=_grlex_key)
        c = rem.pop(e)
        if _divides(lt_e, e):
            qe = tuple(i - j for i, j in zip(e, lt_e))
            qc = rat(c * inv)
            q[qe] = qc
            for ge, gc in g_rest:
                k = tuple(i + j for i, j in zip(qe, ge))
                v = rem.get(k, 0) - qc * gc
                if v:
                    rem[k] = rat(v)
                else:
                    rem.pop(k, None)
        else:
            r[e] = c
    return MultiPoly(f.vars, q, _trusted=True), MultiPoly(f.vars, r, _trusted=True)


def exact_quotient(f: MultiPoly, g: MultiPoly):
    """``f / g`` when the division is exact, else ``None``."""
    if not f.terms:
        return MultiPoly.zero(f.vars)
    lt_e, lt_c = g.leading_term()
    g_rest = [(e, c) for e, c in g.terms.items() if e != lt_e]
    inv = Fraction(1) / Fraction(lt_c)
    rem: Dict[Exp, Rational] = dict(f.terms)
    q: Dict[Exp, Rational] = {}
    while rem:
        e = max(rem, key=_grlex_key)
        if not _divides(lt_e, e):
            return None
        c = rem.pop(e)
        qe = tuple(i - j for i, j in zip(e, lt_e))
        qc = rat(c * inv)
        q[qe] = qc
        for ge, gc in g_rest:
            k = tuple(i + j for i, j in zip(qe, ge))
            v = rem.get(k, 0) - qc * gc
            if v:
                rem[k] = rat(v)
            else:
                rem.pop(k, None)
    return MultiPoly(f.vars, q, _trusted=True)


def divides(g: MultiPoly, f: MultiPoly) -> bool:
    return exact_quotient(f, g) is not None


# -- printing ---------------------------------------------------------------

def _monomial_text(e: Exp, vars) -> str:
    parts = []
    for v, k in zip(vars, e):
        if k == 1:
            parts.append(v)
        elif k:
            parts.append(f"{v}^{k}")
    return "*".join(parts)


def to_text(f: MultiPoly) -> str:
    """Canonical text: descending graded-lex, coefficient 1 elided except on constants."""
    if not f.terms:
        return "0"
    out = []
    for e, c in f.sorted_terms():
        mono = _monomial_text(e, f.vars)
        neg = c < 0
        a = -c if neg else c
        if not mono:
            body = fmt_rat(a)
        elif a == 1:
            body = mono
        else:
            body = f"{fmt_rat(a)}*{mono}"
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


def poly_from_coeffs(coeffs: Iterable[Tuple[Exp, object]], vars) -> MultiPoly:
    return MultiPoly(vars, dict(coeffs))
