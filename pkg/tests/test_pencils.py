"""Pencils of curves and logarithmic forms."""

from __future__ import annotations

import pytest
from hypothesis import assume, given, strategies as st

from foliation_lab.algebra import MultiPoly, parse_poly, poly_gcd
from foliation_lab.birational import linear_map, pullback
from foliation_lab.errors import DegeneratePencil, DegreeMismatch, NotHomogeneous, ResidueRelationViolated
from foliation_lab.foliation import XYZ, ProjFoliation, is_invariant
from foliation_lab.pencils import (LogData, Pencil, conic_pencil, degree_ledger, foliation_from_pencil,
                                   logarithmic_form, shear_foliation, shear_pencil, verify_first_integral)


def _monomials(d):
    return [(i, j, d - i - j) for i in range(d + 1) for j in range(d + 1 - i)]


@st.composite
def pencils(draw, max_s=3):
    s = draw(st.integers(1, max_s))
    G, H = (MultiPoly(XYZ, {e: c for e in _monomials(s) if (c := draw(st.integers(-2, 2)))})
            for _ in range(2))
    assume(G and H and poly_gcd(G, H).is_constant())
    return Pencil(G, H)


@given(pencils())
def test_degree_ledger(P):
    try:
        led = degree_ledger(P)
    except DegeneratePencil:
        return
    assert led["holds"]
    assert led["degree"] + led["deg_R"] == 2 * P.s - 2


@given(pencils())
def test_pencil_is_a_first_integral(P):
    try:
        F, R = foliation_from_pencil(P)
    except DegeneratePencil:
        return
    assert verify_first_integral(F, P)
    # generic members of the pencil are invariant
    for alpha, beta in ((1, 0), (0, 1), (2, 3)):
        member = P.member(alpha, beta)
        assert is_invariant(F, member.primitive())


def test_conic_pencil_form():
    F, R = foliation_from_pencil(conic_pencil())
    # the printed form z^2 dx - yz dy + (y^2 - xz) dz is this one after x -> -x
    shown = ProjFoliation.parse("z^2*dx - y*z*dy + (y^2 - x*z)*dz")
    assert F != shown
    assert F == pullback(shown, linear_map([[-1, 0, 0], [0, 1, 0], [0, 0, 1]]))
    assert F == ProjFoliation.parse("z^2*dx + y*z*dy - (y^2 + x*z)*dz")
    # 2s - 2 = 2 = deg R + 1: the double member z^2 contributes R = const * z
    assert F.degree == 1
    assert R.total_degree() == 1 and R.primitive() == parse_poly("z")


def test_mismatched_pencil_is_not_a_first_integral():
    F, _ = foliation_from_pencil(conic_pencil())
    assert not verify_first_integral(F, Pencil(parse_poly("x^2"), parse_poly("y*z")))


def test_shear_pencil_first_integral():
    P = parse_poly("y^2 + z^2")
    assert verify_first_integral(shear_foliation(P), shear_pencil(P))


def test_monomial_pencil_is_logarithmic():
    # x^p y^q against z^(p+q), (p, q) = (1, 2)
    F, R = foliation_from_pencil(Pencil(parse_poly("x*y^2"), parse_poly("z^3")))
    assert F == ProjFoliation.parse("1*y*z*dx + 2*x*z*dy - 3*y*x*dz")
    assert F.degree == 1 and R.total_degree() == 3


def test_pencil_validation():
    with pytest.raises(DegreeMismatch):
        Pencil(parse_poly("x"), parse_poly("y^2"))
    with pytest.raises(DegeneratePencil):
        Pencil(parse_poly("x*y"), parse_poly("x*z"))
    with pytest.raises(NotHomogeneous):
        Pencil(parse_poly("x + y^2"), parse_poly("z^2"))


# ----------------------------------------------------------------------------
# logarithmic forms


def test_log_form_of_three_lines():
    F = logarithmic_form(LogData((parse_poly("x"), parse_poly("y"), parse_poly("z")), (1, 1, -2)))
    assert F.degree == 1
    for v in ("x", "y", "z"):
        assert is_invariant(F, parse_poly(v))


def test_log_form_matches_monomial_pencil():
    F = logarithmic_form(LogData((parse_poly("x"), parse_poly("y"), parse_poly("z")), (1, 2, -3)))
    assert F == ProjFoliation.parse("y*z*dx + 2*x*z*dy - 3*y*x*dz")


def test_residue_relation_enforced():
    with pytest.raises(ResidueRelationViolated):
        logarithmic_form(LogData((parse_poly("x"), parse_poly("y"), parse_poly("z")), (1, 1, 1)))
    with pytest.raises(ValueError):
        LogData((parse_poly("x*y"), parse_poly("y")), (1, -2))


@given(st.lists(st.sampled_from(["x", "y", "z", "x + y", "x - z", "y^2 + x*z", "x^2 - y*z"]),
                min_size=2, max_size=4, unique=True), st.data())
def test_log_form_degree_and_invariance(texts, data):
    fs = [parse_poly(t) for t in texts]
    for i in range(len(fs)):
        for j in range(i + 1, len(fs)):
            assume(poly_gcd(fs[i], fs[j]).is_constant())
    degs = [f.total_degree() for f in fs]
    lams = [data.draw(st.integers(-3, 3).filter(bool)) for _ in fs[:-1]]
    last = -sum(l * d for l, d in zip(lams, degs))
    assume(last % degs[-1] == 0 and last)
    lams.append(last // degs[-1])
    F = logarithmic_form(LogData(tuple(fs), tuple(lams)))
    assert F.degree <= sum(degs) - 2
    for f in fs:
        assert is_invariant(F, f)
