"""GCD, resultants and rational roots over Q[x1, ..., xn].

The gcd recurses on one main variable at a time: content and primitive part
with respect to that variable, then a subresultant pseudo-remainder sequence on
the primitive parts.  The resultant follows the subresultant algorithm and
agrees with the Sylvester determinant in which the rows of ``f`` come first.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import List

from sympy import divisors

from .poly import MultiPoly, exact_quotient, rat

UPoly = List[MultiPoly]


# -- univariate views over a polynomial coefficient ring ---------------------

def to_upoly(f: MultiPoly, var: str) -> UPoly:
    parts = f.coeffs_in(var)
    if not parts:
        return []
    n = max(parts)
    zero = MultiPoly.zero(f.vars)
    return [parts.get(k, zero) for k in range(n + 1)]


def from_upoly(coeffs: UPoly, var: str, vars) -> MultiPoly:
    x = MultiPoly.var(var, vars)
    out = MultiPoly.zero(vars)
    p = MultiPoly.const(1, vars)
    for c in coeffs:
        if c:
            out = out + c * p
        p = p * x
    return out


def _strip(a: UPoly) -> UPoly:
    while a and not a[-1]:
        a.pop()
    return a


def _deg(a: UPoly) -> int:
    return len(a) - 1


def _div_exact(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    q = exact_quotient(a, b)
    if q is None:
        raise ArithmeticError("inexact division inside the subresultant sequence")
    return q


def prem(a: UPoly, b: UPoly) -> UPoly:
    """Pseudo-remainder lc(b)^(deg a - deg b + 1) * a mod b."""
    m, n = _deg(a), _deg(b)
    if n < 0:
        raise ZeroDivisionError("pseudo-division by zero")
    r = list(a)
    if m < n:
        return _strip(r)
    lcb = b[n]
    e = m - n + 1
    while r and _deg(r) >= n:
        lr = r[-1]
        s = _deg(r) - n
        r = [lcb * c for c in r]
        for i in range(n + 1):
            r[s + i] = r[s + i] - lr * b[i]
        r.pop()
        _strip(r)
        e -= 1
    if e:
        f = lcb ** e
        r = [f * c for c in r]
    return r


def subresultant_prs(a: UPoly, b: UPoly) -> List[UPoly]:
    """Subresultant PRS of a and b (deg a >= deg b)."""
    seq = [a, b]
    if not b:
        return seq
    d = _deg(a) - _deg(b)
    beta = MultiPoly.const((-1) ** (d + 1), a[0].vars)
    psi = MultiPoly.const(-1, a[0].vars)
    r_prev, r_cur = a, b
    while True:
        r = prem(r_prev, r_cur)
        if not r:
            break
        r = [_div_exact(c, beta) for c in r]
        seq.append(r)
        lc = r_cur[-1]
        # psi_{i+1} = (-lc)^d / psi_i^(d-1); unchanged when d == 0
        if d:
            psi = _div_exact((-lc) ** d, psi ** (d - 1))
        d = _deg(r_cur) - _deg(r)
        beta = -lc * psi ** d
        r_prev, r_cur = r_cur, r
    return seq


# -- gcd ----------------------------------------------------------------------

def _monomial_content(f: MultiPoly):
    n = len(f.vars)
    m = [min(e[i] for e in f.terms) for i in range(n)]
    return tuple(m)


def _shift(f: MultiPoly, m, sign=-1) -> MultiPoly:
    return MultiPoly(f.vars, {tuple(a + sign * b for a, b in zip(e, m)): c for e, c in f.terms.items()}, _trusted=True)


def content_in(f: MultiPoly, var: str) -> MultiPoly:
    """Gcd of the coefficients of ``f`` viewed as a polynomial in ``var``."""
    g = MultiPoly.zero(f.vars)
    for c in f.coeffs_in(var).values():
        g = poly_gcd(g, c)
        if g.is_constant():
            return MultiPoly.const(1, f.vars)
    return g


def poly_gcd(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """Primitive greatest common divisor with positive leading coefficient."""
    if f.vars != g.vars:
        raise ValueError("poly_gcd needs a common variable tuple")
    if not f:
        return g.primitive()
    if not g:
        return f.primitive()
    one = MultiPoly.const(1, f.vars)
    if f.is_constant() or g.is_constant():
        return one
    mf, mg = _monomial_content(f), _monomial_content(g)
    m = tuple(min(a, b) for a, b in zip(mf, mg))
    f = _shift(f, mf)
    g = _shift(g, mg)
    mono = MultiPoly(f.vars, {m: 1}, _trusted=True)
    common = [v for v in f.used_vars() if v in g.used_vars()]
    if not common:
        return mono
    if f.is_constant() or g.is_constant():
        return mono
    # Only-in-one variables can be pushed into the content directly.
    only_f = [v for v in f.used_vars() if v not in common]
    only_g = [v for v in g.used_vars() if v not in common]
    if only_f:
        return (mono * poly_gcd(content_in(f, only_f[0]), g)).primitive()
    if only_g:
        return (mono * poly_gcd(f, content_in(g, only_g[0]))).primitive()
    var = min(common, key=lambda v: max(f.degree(v), g.degree(v)))
    cf, cg = content_in(f, var), content_in(g, var)
    c = poly_gcd(cf, cg)
    pf = (f / cf).primitive()
    pg = (g / cg).primitive()
    a, b = to_upoly(pf, var), to_upoly(pg, var)
    if _deg(a) < _deg(b):
        a, b = b, a
    last = subresultant_prs(a, b)[-1]
    if not last:
        last = subresultant_prs(a, b)[-2]
    h = from_upoly(last, var, f.vars)
    if h.degree(var) <= 0:
        h = one
    else:
        h = (h / content_in(h, var)).primitive()
    return (mono * c * h).primitive()


def poly_gcd_many(polys) -> MultiPoly:
    polys = list(polys)
    g = MultiPoly.zero(polys[0].vars)
    for p in polys:
        g = poly_gcd(g, p)
        if g.is_constant() and g:
            return g
    return g


def coprime(f: MultiPoly, g: MultiPoly) -> bool:
    return poly_gcd(f, g).is_constant()


# -- resultant ------------------------------------------------------------------

def resultant(f: MultiPoly, g: MultiPoly, var: str) -> MultiPoly:
    """Res_var(f, g) = det Sylvester(f, g) with the rows of ``f`` on top."""
    if f.vars != g.vars:
        raise ValueError("resultant needs a common variable tuple")
    vars = f.vars
    zero = MultiPoly.zero(vars)
    if not f or not g:
        return zero
    a, b = to_upoly(f, var), to_upoly(g, var)
    da, db = _deg(a), _deg(b)
    if da == 0:
        return a[0] ** db
    if db == 0:
        return b[0] ** da
    s = 1
    if da < db:
        a, b = b, a
        da, db = db, da
        if da % 2 and db % 2:
            s = -1
    one = MultiPoly.const(1, vars)
    gg, h = one, one
    while True:
        delta = _deg(a) - _deg(b)
        if _deg(a) % 2 and _deg(b) % 2:
            s = -s
        r = prem(a, b)
        a = b
        if not r:
            return zero
        denom = gg * h ** delta
        b = [_div_exact(c, denom) for c in r]
        gg = a[-1]
        if delta == 1:
            h = gg
        elif delta > 1:
            h = _div_exact(gg ** delta, h ** (delta - 1))
        if _deg(b) == 0:
            da = _deg(a)
            if da == 0:
                return one.scale(s) * b[0]
            h = _div_exact(b[0] ** da, h ** (da - 1))
            return h.scale(s)


# -- univariate rational roots -------------------------------------------------

def univariate_coeffs(f: MultiPoly, var: str | None = None) -> List[Fraction]:
    """Dense coefficient list (constant first) of a polynomial in one variable."""
    used = f.used_vars()
    if var is None:
        if len(used) > 1:
            raise ValueError(f"not univariate: {used}")
        var = used[0] if used else f.vars[0]
    elif any(v != var for v in used):
        raise ValueError(f"not univariate in {var}: {used}")
    i = f.vars.index(var)
    n = f.degree(var)
    out = [0] * (n + 1)
    for e, c in f.terms.items():
        out[e[i]] = c
    return out


def _int_coeffs(cs):
    den = 1
    for c in cs:
        if isinstance(c, Fraction):
            den = lcm(den, c.denominator)
    return [int(c * den) for c in cs]


def _upoly_gcd_q(a: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    a = [Fraction(c) for c in a]
    b = [Fraction(c) for c in b]
    while b and b[-1] == 0:
        b.pop()
    while a and a[-1] == 0:
        a.pop()
    while b:
        r = list(a)
        while len(r) >= len(b) and r:
            q = r[-1] / b[-1]
            s = len(r) - len(b)
            for i, c in enumerate(b):
                r[s + i] -= q * c
            r.pop()
            while r and r[-1] == 0:
                r.pop()
        a, b = b, r
    return a


def rational_roots(f: MultiPoly, var: str | None = None) -> List[Fraction]:
    """All rational roots of a nonzero univariate polynomial (rational root theorem)."""
    cs = univariate_coeffs(f, var)
    while cs and cs[-1] == 0:
        cs.pop()
    if not cs:
        raise ValueError("the zero polynomial has every root")
    roots: List[Fraction] = []
    k = 0
    while cs[k] == 0:
        k += 1
    if k:
        roots.append(Fraction(0))
    cs = cs[k:]
    if len(cs) <= 1:
        return roots
    deriv = [i * c for i, c in enumerate(cs)][1:]
    g = _upoly_gcd_q(cs, deriv)
    if len(g) > 1:
        # square-free part: cs / g
        num = [Fraction(c) for c in cs]
        q = [Fraction(0)] * (len(num) - len(g) + 1)
        while len(num) >= len(g):
            t = num[-1] / g[-1]
            s = len(num) - len(g)
            q[s] = t
            for i, c in enumerate(g):
                num[s + i] -= t * c
            num.pop()
        cs = q
    ints = _int_coeffs(cs)
    cont = 0
    for c in ints:
        cont = gcd(cont, c)
    ints = [c // cont for c in ints]
    n = len(ints) - 1
    if n == 1:
        roots.append(Fraction(-ints[0], ints[1]))
        return sorted(roots)
    if max(abs(ints[0]), abs(ints[-1])) > _DIVISOR_LIMIT:
        roots.extend(_linear_factor_roots(ints))
        return sorted(set(roots))
    found = set()
    for p in divisors(abs(ints[0])):
        for q in divisors(abs(ints[-1])):
            for num in (p, -p):
                if _eval_homog(ints, num, q) == 0:
                    found.add(Fraction(num, q))
    roots.extend(found)
    return sorted(set(roots))


_DIVISOR_LIMIT = 10 ** 24


def _linear_factor_roots(ints) -> List[Fraction]:
    """Rational roots via univariate factorisation over Q (large end coefficients)."""
    from sympy import Poly, Symbol

    t = Symbol("t")
    P = Poly(list(reversed(ints)), t)
    out = []
    for fac, _ in P.factor_list()[1]:
        if fac.degree() == 1:
            a, b = (int(c) for c in fac.all_coeffs())
            out.append(Fraction(-b, a))
    return out


def _eval_homog(ints, num, den) -> int:
    """den^n * f(num/den) for integer coefficient list (constant first)."""
    n = len(ints) - 1
    acc = ints[n]
    for i in range(n - 1, -1, -1):
        acc = acc * num + ints[i] * den ** (n - i)
    return acc
