"""Univariate truncated power series over Q."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from ..errors import Obstruction
from .poly import MultiPoly, Rational, rat


class TruncSeries:
    """``sum_{k<=N} c_k var^k`` modulo ``var^(N+1)``.

    Products and compositions of two series of order N stay of order N; the
    result of mixing orders is truncated at the smaller one.
    """

    __slots__ = ("var", "coeffs", "order")

    def __init__(self, coeffs: Sequence, order: int, var: str = "z"):
        if order < 0:
            raise ValueError("truncation order must be non-negative")
        cs = [rat(c) for c in list(coeffs)[: order + 1]]
        cs.extend([0] * (order + 1 - len(cs)))
        self.coeffs: List[Rational] = cs
        self.order = order
        self.var = var

    @classmethod
    def from_poly(cls, f: MultiPoly, order: int, var: str | None = None):
        used = f.used_vars()
        if var is None:
            var = used[0] if used else "z"
        if any(v != var for v in used):
            raise ValueError(f"{f} is not univariate in {var}")
        cs = [0] * (order + 1)
        if var in f.vars:
            i = f.vars.index(var)
            for e, c in f.terms.items():
                if e[i] <= order:
                    cs[e[i]] = c
        else:
            cs[0] = f.constant_term()
        return cls(cs, order, var)

    @classmethod
    def constant(cls, c, order, var="z"):
        return cls([c], order, var)

    @classmethod
    def variable(cls, order, var="z"):
        return cls([0, 1], order, var)

    def __getitem__(self, k: int) -> Rational:
        return self.coeffs[k]

    def __len__(self):
        return self.order + 1

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.order == other.order and self.var == other.var and self.coeffs == other.coeffs

    def __repr__(self):
        nz = [(k, c) for k, c in enumerate(self.coeffs) if c]
        body = " + ".join(f"{c}*{self.var}^{k}" for k, c in nz[:6]) or "0"
        if len(nz) > 6:
            body += " + ..."
        return f"TruncSeries({body} + O({self.var}^{self.order + 1}))"

    def _check(self, other):
        if isinstance(other, TruncSeries):
            if other.var != self.var:
                raise ValueError("series in different variables")
            return other
        return TruncSeries.constant(other, self.order, self.var)

    def valuation(self) -> int | None:
        """Index of the first nonzero coefficient, ``None`` when all vanish."""
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return None

    def truncate(self, order: int) -> "TruncSeries":
        return TruncSeries(self.coeffs, order, self.var)

    def __add__(self, other):
        other = self._check(other)
        n = min(self.order, other.order)
        return TruncSeries([a + b for a, b in zip(self.coeffs[: n + 1], other.coeffs[: n + 1])], n, self.var)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries([-c for c in self.coeffs], self.order, self.var)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            c = rat(other)
            return TruncSeries([a * c for a in self.coeffs], self.order, self.var)
        other = self._check(other)
        n = min(self.order, other.order)
        a = self.coeffs
        b = other.coeffs
        out = [0] * (n + 1)
        nza = [(i, c) for i, c in enumerate(a[: n + 1]) if c]
        nzb = [(j, c) for j, c in enumerate(b[: n + 1]) if c]
        for i, ca in nza:
            lim = n - i
            for j, cb in nzb:
                if j > lim:
                    break
                out[i + j] += ca * cb
        return TruncSeries(out, n, self.var)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = TruncSeries.constant(1, self.order, self.var)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def derivative(self) -> "TruncSeries":
        """Formal derivative; the top coefficient is lost, so the order drops by one."""
        cs = [k * c for k, c in enumerate(self.coeffs)][1:]
        return TruncSeries(cs, max(self.order - 1, 0), self.var)

    def inverse(self) -> "TruncSeries":
        if not self.coeffs[0]:
            raise ZeroDivisionError("series with zero constant term is not invertible")
        n = self.order
        inv0 = Fraction(1) / Fraction(self.coeffs[0])
        out = [rat(inv0)]
        for k in range(1, n + 1):
            s = 0
            for j in range(1, k + 1):
                if self.coeffs[j]:
                    s += self.coeffs[j] * out[k - j]
            out.append(rat(-s * inv0))
        return TruncSeries(out, n, self.var)

    def shift(self, k: int) -> "TruncSeries":
        """Multiply by var^k (k may be negative when the low coefficients vanish)."""
        if k >= 0:
            return TruncSeries([0] * k + self.coeffs, self.order, self.var)
        if any(self.coeffs[: -k]):
            raise ValueError("cannot divide: low coefficients do not vanish")
        return TruncSeries(self.coeffs[-k:], self.order + k, self.var)

    def to_poly(self, vars=None) -> MultiPoly:
        vars = tuple(vars) if vars else (self.var,)
        i = vars.index(self.var)
        terms = {}
        for k, c in enumerate(self.coeffs):
            if c:
                e = [0] * len(vars)
                e[i] = k
                terms[tuple(e)] = c
        return MultiPoly(vars, terms)

    def is_zero(self) -> bool:
        return not any(self.coeffs)


def compose_poly(f: MultiPoly, images: Sequence[TruncSeries]) -> TruncSeries:
    """Evaluate a polynomial at truncated series (one per variable of ``f``)."""
    if len(images) != len(f.vars):
        raise ValueError("one series per variable")
    order = min(s.order for s in images)
    var = images[0].var
    maxdeg = [max((e[i] for e in f.terms), default=0) for i in range(len(f.vars))]
    powers = []
    for s, m in zip(images, maxdeg):
        p = [TruncSeries.constant(1, order, var)]
        for _ in range(m):
            p.append(p[-1] * s)
        powers.append(p)
    acc = [0] * (order + 1)
    for e, c in f.terms.items():
        t = None
        for i, k in enumerate(e):
            if k:
                t = powers[i][k] if t is None else t * powers[i][k]
        if t is None:
            acc[0] += c
        else:
            for j, v in enumerate(t.coeffs):
                if v:
                    acc[j] += c * v
    return TruncSeries(acc, order, var)


@dataclass(frozen=True)
class StepResult:
    value: Rational
    free: bool = False


def series_solve_linear_step(L, rhs) -> StepResult:
    """Solve ``L * c = rhs`` for one coefficient of a term-by-term solver.

    A vanishing ``L`` with vanishing ``rhs`` leaves ``c`` free (0 is chosen and
    flagged); a vanishing ``L`` with nonzero ``rhs`` is an obstruction.
    """
    L, rhs = rat(L), rat(rhs)
    if L:
        return StepResult(rat(Fraction(rhs) / Fraction(L)))
    if rhs:
        raise Obstruction(f"no formal solution: 0 * c = {rhs}")
    return StepResult(0, free=True)


def series_pairs(s: TruncSeries) -> List[Tuple[int, Rational]]:
    return [(k, c) for k, c in enumerate(s.coeffs) if c]
