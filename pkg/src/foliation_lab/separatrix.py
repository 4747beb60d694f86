"""Formal separatrices, the W(t) equation and Gevrey diagnostics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Sequence, Tuple

from .algebra import MultiPoly, TruncSeries, compose_poly, series_solve_linear_step
from .algebra.poly import Rational, rat
from .errors import Obstructed, Obstruction, PreconditionFailed, TooFewTerms
from .foliation import YZ, LocalFoliation


@dataclass(frozen=True)
class SeparatrixSeries:
    """A smooth formal curve through the origin of a chart.

    ``solved_for = "y"`` means the curve ``y = h(z)``; ``"z"`` means ``z = h(y)``
    (then ``h`` is still stored as a series in its own variable).
    """

    h: TruncSeries
    initial_jet_source: str = "prescribed"
    free_parameters: Tuple[int, ...] = ()
    obstructed: bool = False
    solved_for: str = "y"

    @property
    def order(self) -> int:
        return self.h.order

    def coefficients(self) -> List[Rational]:
        return list(self.h.coeffs)

    def oriented(self, L: LocalFoliation) -> LocalFoliation:
        """``L`` in coordinates where this curve reads ``y = h(z)``."""
        return L.swapped() if self.solved_for == "z" else L


def axis(solved_for: str = "y", order: int = 20) -> SeparatrixSeries:
    """The coordinate axis ``y = 0`` (or ``z = 0``) as a series."""
    return SeparatrixSeries(TruncSeries([], order), solved_for=solved_for)


def residual(L: LocalFoliation, h: TruncSeries) -> TruncSeries:
    """``a(h,z) h' + b(h,z)``, exact to order ``h.order - 1``."""
    z = TruncSeries.variable(h.order, h.var)
    A = compose_poly(L.a, [h, z])
    B = compose_poly(L.b, [h, z])
    hp = h.derivative()
    return A.truncate(hp.order) * hp + B.truncate(hp.order)


def _order(s: TruncSeries):
    v = s.valuation()
    return math.inf if v is None else v


def solve_separatrix(L: LocalFoliation, initial_jet: TruncSeries | Sequence, N: int,
                     solved_for: str = "y", source: str = "prescribed") -> SeparatrixSeries:
    """Extend a jet of ``y = h(z)`` to order N so that ``a(h,z)h' + b(h,z) = 0``.

    At order n the unknown coefficient enters the residual first at
    ``z^(n+e)`` with ``e = min(ord P, ord a(h,z) - 1)``, ``P = a_y(h,z)h' + b_y(h,z)``;
    the coefficient there is affine in it and is solved for exactly.
    """
    L0 = L.at_origin()
    if solved_for == "z":
        L0 = L0.swapped()
    elif solved_for != "y":
        raise ValueError("solved_for must be 'y' or 'z'")
    if not isinstance(initial_jet, TruncSeries):
        initial_jet = TruncSeries(list(initial_jet), max(len(initial_jet) - 1, 0))
    k0 = initial_jet.order
    if initial_jet[0]:
        raise PreconditionFailed("the curve must pass through the origin")
    M = 2 * N + 4
    coeffs = list(initial_jet.coeffs) + [0] * (M + 1 - k0 - 1)
    ay, by = L0.a.diff("y"), L0.b.diff("y")
    free: List[int] = []
    checked = 0  # residual coefficients below this index are known to vanish

    def series(cs):
        return TruncSeries(cs, M)

    def res(cs):
        return residual(L0, series(cs))

    for n in range(k0 + 1, N + 1):
        h = series(coeffs)
        zs = TruncSeries.variable(M)
        P = compose_poly(ay, [h, zs]).truncate(M - 1) * h.derivative() \
            + compose_poly(by, [h, zs]).truncate(M - 1)
        e = min(_order(P), _order(compose_poly(L0.a, [h, zs])) - 1)
        if e == math.inf or n + e >= M - 1:
            raise PreconditionFailed(f"order {n} does not enter the residual below z^{M - 1}")
        t = n + e
        R0 = res(coeffs)
        for k in range(checked, t):
            if R0[k]:
                raise Obstructed(f"residual coefficient of z^{k} is {R0[k]} before order {n}")
        c1 = list(coeffs)
        c1[n] = 1
        cm = list(coeffs)
        cm[n] = -1
        R1, Rm = res(c1), res(cm)
        if R1[t] + Rm[t] - 2 * R0[t]:
            raise PreconditionFailed(f"order {n} is not linearly determined; prescribe a longer jet")
        Lc = R1[t] - R0[t]
        try:
            step = series_solve_linear_step(Lc, -R0[t])
        except Obstruction as exc:
            raise Obstructed(f"order {n}: {exc}") from None
        coeffs[n] = step.value
        if step.free:
            free.append(n)
        checked = t + 1
    h = TruncSeries(coeffs, N)
    R = residual(L0, h)
    if not R.is_zero():
        raise Obstructed(f"residual does not vanish: first term at z^{R.valuation()}")
    return SeparatrixSeries(h, source, tuple(free), False, solved_for)


def kernel_direction(L: LocalFoliation) -> Tuple[Rational, Rational] | None:
    """A vector spanning the kernel of the linear part of ``b d/dy - a d/dz``."""
    J = linear_part(L)
    (p, q), (r, s) = J
    if p * s - q * r:
        return None
    if p or q:
        return (rat(-q), rat(p))
    if r or s:
        return (rat(-s), rat(r))
    return None


def linear_part(L: LocalFoliation):
    """Jacobian at the origin of the vector field ``(b, -a)``."""
    L0 = L.at_origin()
    a, b = L0.a, L0.b

    def lin(f, v):
        e = (1, 0) if v == "y" else (0, 1)
        return f.terms.get(e, 0)

    return ((lin(b, "y"), lin(b, "z")), (-lin(a, "y"), -lin(a, "z")))


def separatrix_along(L: LocalFoliation, direction: Tuple[Rational, Rational], N: int) -> SeparatrixSeries:
    """Smooth formal separatrix tangent to ``direction`` (a (dy, dz) vector)."""
    p, q = direction
    if q:
        return solve_separatrix(L, [0, Fraction(p) / Fraction(q)], N, "y", "eigendirection")
    return solve_separatrix(L, [0, 0], N, "z", "eigendirection")


# ----------------------------------------------------------------------------
# W(t)


def solve_w_ode(d: int, alpha, beta, N: int) -> TruncSeries:
    """Coefficients ``w_0 .. w_(N-1)`` of the power-series solution with ``W(0) = beta``."""
    if d < 3 or d % 2 == 0:
        raise PreconditionFailed("d must be an odd integer >= 3")
    alpha, beta = rat(alpha), rat(beta)
    if not alpha or not beta or N < 1:
        raise PreconditionFailed("alpha and beta must be nonzero, N >= 1")
    cs: List[Rational] = [beta] + [0] * N
    # the equation at t^n is affine in w_n; probe it at w_n = 0 and w_n = 1
    for n in range(1, N):
        cs[n] = 0
        E0 = _w_equation(d, alpha, beta, TruncSeries(cs, n + 1, "t"))
        cs[n] = 1
        E1 = _w_equation(d, alpha, beta, TruncSeries(cs, n + 1, "t"))
        try:
            step = series_solve_linear_step(E1[n] - E0[n], -E0[n])
        except Obstruction as exc:
            raise Obstructed(f"w_{n}: {exc}") from None
        if step.free:
            raise Obstructed(f"w_{n} is not determined")
        cs[n] = step.value
    return TruncSeries(cs[:N], N - 1, "t")


def _w_equation(d: int, alpha, beta, W: TruncSeries) -> TruncSeries:
    """Left-hand side of the W equation, exact through ``t^(W.order - 1)``."""
    t = TruncSeries.variable(W.order, "t")
    Wp = W.derivative()
    n = Wp.order
    Wn = W.truncate(n)
    tn = t.truncate(n)
    U = Wn - beta - tn * (Wn ** d) * alpha
    V = tn * Wp * Fraction(d * d + 1, 2) + Wn * Fraction(d - 1, 2)
    D = Wn - beta
    return U * V + D * D


def w_residual(d: int, alpha, beta, W: TruncSeries) -> TruncSeries:
    """The equation evaluated at ``W``; exact through ``t^(N-1)`` for N coefficients.

    ``W`` is padded by one zero coefficient so that the derivative keeps all
    known terms; coefficients from ``t^N`` on are not meaningful and are dropped.
    """
    N = W.order + 1
    padded = TruncSeries(list(W.coeffs) + [0], N, "t")
    E = _w_equation(d, rat(alpha), rat(beta), padded)
    return E.truncate(N - 1)


def w_scaling_exponents(d: int, N: int) -> List[Tuple[int, Fraction, Fraction]]:
    """Measure how w_n(alpha, beta) depends on alpha and beta.

    Solves at (1,1), (2,1) and (1,2) and returns, for every n with
    w_n(1,1) != 0, the exponents ``(p, q)`` such that
    ``w_n(2,1) = 2^p w_n(1,1)`` and ``w_n(1,2) = 2^q w_n(1,1)``.
    An exponent is ``None`` when the ratio is not a power of two.
    """
    base = solve_w_ode(d, 1, 1, N)
    ra = solve_w_ode(d, 2, 1, N)
    rb = solve_w_ode(d, 1, 2, N)
    out = []
    for n in range(N):
        if not base[n]:
            continue
        out.append((n, _log2_exact(Fraction(ra[n]) / Fraction(base[n])),
                    _log2_exact(Fraction(rb[n]) / Fraction(base[n]))))
    return out


def _log2_exact(r: Fraction):
    if r <= 0:
        return None
    num, den = r.numerator, r.denominator
    if num & (num - 1) == 0 and den == 1:
        return num.bit_length() - 1
    if den & (den - 1) == 0 and num == 1:
        return -(den.bit_length() - 1)
    return None


# ----------------------------------------------------------------------------
# Gevrey diagnostics


@dataclass(frozen=True)
class GevreyFit:
    s_hat: float
    log_growth: float
    r_squared: float
    n_range: Tuple[int, int]


def _log_abs(c: Rational) -> float:
    c = Fraction(c)
    return math.log(abs(c.numerator)) - math.log(c.denominator)


def gevrey_fit(coefficients: Sequence, min_terms: int = 20) -> GevreyFit:
    """Least-squares fit of ``log|a_n|`` on ``1, n, log n!`` over nonzero terms."""
    import numpy as np

    pts = [(n, _log_abs(c)) for n, c in enumerate(coefficients) if c]
    if len(pts) < min_terms:
        raise TooFewTerms(f"need at least {min_terms} nonzero coefficients, got {len(pts)}")
    ns = np.array([p[0] for p in pts], dtype=float)
    ys = np.array([p[1] for p in pts], dtype=float)
    X = np.column_stack([np.ones_like(ns), ns, [math.lgamma(n + 1) for n in ns]])
    coef, *_ = np.linalg.lstsq(X, ys, rcond=None)
    fitted = X @ coef
    ss_res = float(np.sum((ys - fitted) ** 2))
    ss_tot = float(np.sum((ys - ys.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return GevreyFit(float(coef[2]), float(coef[1]), max(0.0, min(1.0, r2)),
                     (int(ns[0]), int(ns[-1])))
