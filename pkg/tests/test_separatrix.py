"""Formal separatrices, the W(t) series and the Gevrey fit.

Residuals are rechecked in sympy, independently of the truncated-series code.
"""

from __future__ import annotations

import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from foliation_lab.algebra import MultiPoly, TruncSeries
from foliation_lab.errors import Indistinguishable, Obstructed, PreconditionFailed, TooFewTerms
from foliation_lab.families import FamilySpec, build_family
from foliation_lab.foliation import YZ, LocalFoliation
from foliation_lab.local import contact_order, cs_index_smooth, gsv_index_smooth, local_at, milnor_fulton
from foliation_lab.reduction import essen_holds_everywhere, reduce
from foliation_lab.separatrix import (SeparatrixSeries, gevrey_fit, residual, solve_separatrix,
                                      solve_w_ode, w_residual, w_scaling_exponents)

Y, Z, T = sympy.symbols("y z t")
y, z = MultiPoly.gens(YZ)


def _sym(f: MultiPoly):
    return sum(sympy.Rational(c.numerator, c.denominator) * Y ** e[0] * Z ** e[1]
               for e, c in f.terms.items())


def _series(cs, var):
    return sum(sympy.Rational(Fraction(c).numerator, Fraction(c).denominator) * var ** k
               for k, c in enumerate(cs) if c)


def sympy_residual_order(L: LocalFoliation, S: SeparatrixSeries) -> int:
    """z-order of ``a(h,z) h' + b(h,z)`` computed in sympy (inf when zero)."""
    h = _series(S.coefficients(), Z)
    a = _sym(L.a).subs({Y: h, Z: Z}, simultaneous=True)
    b = _sym(L.b).subs({Y: h, Z: Z}, simultaneous=True)
    r = sympy.Poly(sympy.expand(a * sympy.diff(h, Z) + b), Z)
    exps = [m[0] for m in r.monoms()]
    return min(exps) if exps else math.inf


def normal_form(**p):
    return build_family(FamilySpec("nilpotent_normal", p))


# ----------------------------------------------------------------------------
# nilpotent normal form  u z^N d/dy + (y + a z^m) d/dz,  N = d^2 + d + 1


@pytest.fixture(scope="module")
def normal_separatrices():
    L = normal_form()
    N = 40
    S1 = solve_separatrix(L, [0] * 12 + [Fraction(1, 12)], N)
    S2 = solve_separatrix(L, [0, 0, -1], N)
    return L, N, S1, S2


def test_normal_form_family_values():
    L = normal_form()
    assert L.same_as(LocalFoliation.parse("(y + z^2)*dy - z^13*dz"))
    assert milnor_fulton(L) == 13


def test_first_separatrix_leading_term(normal_separatrices):
    # -(h + z^2) h' + z^13 = 0 with h = c z^12 forces 12 c = 1
    L, N, S1, _ = normal_separatrices
    cs = S1.coefficients()
    assert all(c == 0 for c in cs[:12])
    assert cs[12] == Fraction(1, 12)
    assert sympy_residual_order(L, S1) >= N


def test_second_separatrix_leading_term(normal_separatrices):
    L, N, _, S2 = normal_separatrices
    cs = S2.coefficients()
    assert cs[:3] == [0, 0, -1]
    assert sympy_residual_order(L, S2) >= N


def test_normal_form_indices(normal_separatrices):
    L, _, S1, S2 = normal_separatrices
    assert contact_order(S1, S2) == 2
    assert gsv_index_smooth(L, S1) == 2
    assert gsv_index_smooth(L, S2) == 12


@pytest.mark.parametrize("d, m", [(3, 2), (3, 3), (5, 3), (5, 2)])
def test_normal_form_reduction(d, m):
    # m blow-ups: a corner, a resonant point with eigenvalues -1 and m, and a saddle-node.
    # Milnor bookkeeping leaves d^2 + d + 3 - 2m at the saddle-node, i.e. d^2 + 2 when m = (d + 1) / 2
    T = reduce(normal_form(d=d, m=m, a=1, u=1))
    assert essen_holds_everywhere(T)
    assert T.blowups() == m
    leaves = T.final_points()
    sn = [n for n in leaves if n.kind == "saddle_node"]
    assert len(sn) == 1 and sn[0].milnor == d * d + d + 3 - 2 * m
    if 2 * m == d + 1:
        assert sn[0].milnor == d * d + 2
    last = f"E{m}"
    on_last = [n for n in leaves if last in n.components.values()]
    assert len(on_last) == 3
    corner = [n for n in on_last if len(n.components) == 2]
    assert len(corner) == 1 and set(corner[0].components.values()) == {last, f"E{m - 1}"}
    free = [n for n in on_last if len(n.components) == 1 and n.kind == "resonant"]
    assert len(free) == 1 and sorted(free[0].eigen.rational_eigenvalues()) == [-1, m]


def test_strong_separatrix_of_dulac_form():
    # z^(k+1) dy - y (1 + lam z^k) dz: y = 0 is invariant
    L = LocalFoliation.parse("z^3*dy - y*(1 + 5*z^2)*dz")
    S = solve_separatrix(L, [0], 20)
    assert all(c == 0 for c in S.coefficients())
    assert residual(L, S.h).is_zero()


def test_free_orders_are_reported():
    # radial point: every line is invariant, so the slope is free
    S = solve_separatrix(LocalFoliation.parse("z*dy - y*dz"), [0], 8)
    assert 1 in S.free_parameters
    assert all(c == 0 for c in S.coefficients())


def test_obstructed_jet():
    with pytest.raises(Obstructed):
        solve_separatrix(LocalFoliation.parse("z*dy + y*dz"), [0, 1], 8)
    with pytest.raises(PreconditionFailed):
        solve_separatrix(LocalFoliation.parse("z*dy + y*dz"), [1], 8)


@given(st.fractions(min_value=-4, max_value=4, max_denominator=3).filter(bool),
       st.fractions(min_value=-3, max_value=3, max_denominator=3).filter(bool))
def test_hyperbolic_separatrix_residual(lam, c):
    # linear saddle plus a quadratic term; the separatrix tangent to z = 0 direction has slope 0
    L = LocalFoliation(z * (-lam) + y * y * c, y + z * z)
    try:
        S = solve_separatrix(L, [0, 0], 16)
    except (Obstructed, PreconditionFailed):
        return
    assert sympy_residual_order(L, S) >= 16


def test_nilpotent_family_separatrix_shape():
    # at (1:0:0) one separatrix reads y = z^2 W with W(0) = beta
    for beta in (1, 2, Fraction(-1, 3)):
        F = build_family(FamilySpec("nilpotent", {"d": 3, "alpha": 1, "beta": beta}))
        L = local_at(F, (1, 0, 0))
        S = solve_separatrix(L, [0, 0, beta], 30)
        assert S.coefficients()[:3] == [0, 0, beta]
        assert sympy_residual_order(L, S) >= 30
        assert cs_index_smooth(L, S) == 1


# ----------------------------------------------------------------------------
# contact order


def test_contact_order_examples():
    s1 = SeparatrixSeries(TruncSeries([0, 0, 1], 8))
    s2 = SeparatrixSeries(TruncSeries([0, 0, 1, 0, 0, 1], 8))
    assert contact_order(s1, s2) == 5
    with pytest.raises(Indistinguishable):
        contact_order(s1, s1)


# ----------------------------------------------------------------------------
# W(t)


def _w_sympy_residual(d, alpha, beta, cs):
    W = _series(cs, T)
    a, b = sympy.Rational(alpha), sympy.Rational(beta)
    E = (W - b - a * T * W ** d) * (sympy.Rational(d * d + 1, 2) * T * sympy.diff(W, T)
                                    + sympy.Rational(d - 1, 2) * W) + (W - b) ** 2
    p = sympy.Poly(sympy.expand(E), T)
    return [c for (k,), c in zip(p.monoms(), p.coeffs()) if k < len(cs)]


def test_w_series_oracle():
    W = solve_w_ode(3, 1, 1, 12)
    assert W[0] == 1
    assert _w_sympy_residual(3, 1, 1, W.coeffs) == []
    assert w_residual(3, 1, 1, W).is_zero()


@given(st.sampled_from([3, 5]), st.fractions(min_value=-3, max_value=3, max_denominator=3).filter(bool),
       st.fractions(min_value=-3, max_value=3, max_denominator=3).filter(bool))
def test_w_initial_value_and_residual(d, alpha, beta):
    W = solve_w_ode(d, alpha, beta, 6)
    assert W[0] == beta
    assert w_residual(d, alpha, beta, W).is_zero()


def test_w_preconditions():
    for args in ((4, 1, 1, 5), (1, 1, 1, 5), (3, 0, 1, 5), (3, 1, 0, 5)):
        with pytest.raises(PreconditionFailed):
            solve_w_ode(*args)


def test_w_scaling_is_monomial():
    # every coefficient scales by a power of two in alpha and in beta
    out = w_scaling_exponents(3, 10)
    assert out and all(p is not None and q is not None for _, p, q in out)
    n0, p0, q0 = out[0]
    assert (n0, p0, q0) == (0, 0, 1)


# ----------------------------------------------------------------------------
# Gevrey fit


def test_gevrey_on_known_growth():
    inv = [Fraction(1, math.factorial(n)) for n in range(40)]
    fac = [math.factorial(n) for n in range(40)]
    geo = [Fraction(3, 2) ** n for n in range(40)]
    assert abs(gevrey_fit(inv).s_hat + 1) < 0.1
    assert abs(gevrey_fit(fac).s_hat - 1) < 0.1
    assert abs(gevrey_fit(geo).s_hat) < 0.1
    assert 0 <= gevrey_fit(fac).r_squared <= 1


def test_gevrey_skips_zero_terms():
    cs = [math.factorial(n) if n % 2 else 0 for n in range(60)]
    fit = gevrey_fit(cs)
    assert fit.n_range == (1, 59)
    with pytest.raises(TooFewTerms):
        gevrey_fit([1] * 10)
