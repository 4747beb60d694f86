"""Named families: side conditions, censuses and the S-strata reductions."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from foliation_lab.errors import InvalidParameters
from foliation_lab.families import (FAMILIES, FamilySpec, build_family, homogenized_n0, homogenized_saddle_node,
                                    projectivize, s9_chart_display, s9_corner_chart, s9_cusp, s9_cusp_check,
                                    s9_separatrix_residual, s9_weak_separatrix, s11_p3)
from foliation_lab.algebra import MultiPoly
from foliation_lab.foliation import LocalFoliation, restrict_to_chart
from foliation_lab.local import local_at, singular_points
from foliation_lab.reduction import reduce, type_predicates

small = st.fractions(min_value=-4, max_value=4, max_denominator=3)
S11_DULAC = {"a1": -3, "a0": 0, "q2": Fraction(3, 2), "q1": Fraction(2, 3), "q0": 1, "c": Fraction(3, 2)}


def test_every_family_builds_with_defaults():
    for name in FAMILIES:
        spec = FamilySpec(name)
        assert spec.validity == []
        assert build_family(spec) is not None


@pytest.mark.parametrize("name, params", [
    ("S12", {"beta1": 0}),
    ("S12", {"alpha1": 2, "alpha2": 1, "alpha": 1}),
    ("S9", {"b": 0}),
    ("S11", {"c": 0}),
    ("S15", {"b": 0}),
    ("nilpotent", {"d": 4}),
    ("nilpotent", {"alpha": 0}),
    ("nilpotent_normal", {"m": 4}),
    ("degree5", {"n1": 3, "n2": 4, "n3": 5}),
    ("unique_point", {"n": 1}),
    ("S9", {"zeta": 1}),
])
def test_invalid_parameters(name, params):
    spec = FamilySpec(name, params)
    assert spec.validity
    with pytest.raises(InvalidParameters) as exc:
        build_family(spec)
    assert exc.value.violations == spec.validity


def test_unknown_family():
    with pytest.raises(InvalidParameters):
        build_family(FamilySpec("S10"))


@pytest.mark.parametrize("name", ["X2", "X3"])
def test_degree_two_examples_have_one_point(name):
    F = build_family(FamilySpec(name))
    assert F.degree == 2
    C = singular_points(F)
    assert C.complete and len(C.points) == 1


@pytest.mark.parametrize("name", ["S9", "S9b", "S11", "S12", "S15"])
def test_strata_have_one_point_in_degree_three(name):
    F = projectivize(build_family(FamilySpec(name)))
    assert F.degree == 3
    C = singular_points(F)
    assert C.complete and len(C.points) == 1 and C.points[0].milnor == 13


def test_printed_s11_has_extra_points():
    # z^2 + Q2 in place of z^2 + z Q2 adds points on z = 0
    C = singular_points(projectivize(build_family(FamilySpec("S11_printed"))))
    assert len(C.points) > 1


def test_s11_p3_factorisation():
    p = FamilySpec("S11").resolved()
    P3 = s11_p3(p)
    assert P3.is_homogeneous() and P3.total_degree() == 3
    assert P3.terms.get((3, 0))


# ----------------------------------------------------------------------------
# S9


@pytest.mark.parametrize("params", [{"a2": 0, "a1": 0, "a0": 0}, {"a2": 1, "a1": 2, "a0": 3}])
def test_s9_cusp(params):
    assert s9_cusp_check(params)
    assert not s9_cusp_check(params, s9_cusp(params, constant=7))


@given(small, small, small)
def test_s9_weak_separatrix_is_invariant(a2, a1, a0):
    params = {"a2": a2, "a1": a1, "a0": a0}
    w = s9_weak_separatrix(params)
    assert w.total_degree() <= 3
    assert s9_separatrix_residual(params, w).is_zero()


def test_s9_weak_separatrix_constant_term():
    # the residual-zero solution ends in 6 v^3, as in the cusp, not 8 v^3
    w = s9_weak_separatrix({"a2": 0, "a1": 0, "a0": 0})
    assert [w.terms.get((k,), 0) for k in range(4)] == [-1, -3, -6, -6]
    v3 = MultiPoly.var("v", ("v",)) ** 3
    printed = w + v3 * 6 - v3 * 8
    assert not s9_separatrix_residual({"a2": 0, "a1": 0, "a0": 0}, printed).is_zero()


@given(small, small, small)
def test_s9_corner_chart_matches_display(a2, a1, a0):
    params = {"a2": a2, "a1": a1, "a0": a0}
    assert s9_corner_chart(params).same_as(s9_chart_display(params))


def test_s9_second_case():
    T = reduce(build_family(FamilySpec("S9b")))
    assert not T.unresolved
    assert not type_predicates(T).is_second_type


# ----------------------------------------------------------------------------
# S11


def _e2_points(T):
    return [n for n in T.nodes if n.depth == 2]


def test_s11_two_blowups_four_points():
    T = reduce(build_family(FamilySpec("S11")))
    pts = _e2_points(T)
    assert len(pts) == 4
    corner = [n for n in pts if len(n.components) == 2]
    assert len(corner) == 1 and corner[0].linear_class == "hyperbolic_resonant"
    sn = [n for n in pts if n.kind == "saddle_node"]
    assert len(sn) == 1 and sn[0].weak_in_divisor is False
    node = [n for n in pts if n.linear_class == "rational_positive"]
    assert len(node) == 1
    l1, l2 = node[0].eigen.rational_eigenvalues()
    assert max(l1 / l2, l2 / l1) == 2


def test_s11_ratio_two_point_dicritical_case():
    # default parameters: the 1:2 node resolves dicritically, no bad saddle-node appears
    T = reduce(build_family(FamilySpec("S11")))
    assert any(n.kind == "dicritical_contact" for n in T.nodes)
    assert type_predicates(T).is_second_type


def test_s11_ratio_two_point_dulac_case():
    T = reduce(build_family(FamilySpec("S11", S11_DULAC)))
    assert any(n.kind == "saddle_node" and n.weak_in_divisor for n in T.final_points())
    assert not type_predicates(T).is_second_type


@pytest.mark.xfail(strict=True, reason="dicritical 1:2 node leaves every saddle-node transversal")
def test_s11_never_second_type():
    T = reduce(build_family(FamilySpec("S11")))
    assert not type_predicates(T).is_second_type


def test_s11_simplified_chart_at_p0():
    # a1 = 1, a0 = 0, Q2 = y^2, c = 1 after y = y1, z = y1 z1 and y1 = y2 z2, z1 = z2
    T = reduce(build_family(FamilySpec("S11")))
    shown = LocalFoliation.parse("(1 + y)*z*dy - (y*(y^2 - y - 2) + y^3*z^3)*dz")
    ours = [n for n in _e2_points(T) if len(n.components) == 2][0]
    assert ours.linear_class == "hyperbolic_resonant"
    # the chart display has p0 at the origin, p2 at (-1, 0), p3 at (2, 0)
    kinds = {p: reduce(shown.moved_to(p).at_origin()).root.linear_class for p in ((0, 0), (-1, 0), (2, 0))}
    assert kinds == {(0, 0): "hyperbolic_resonant", (-1, 0): "saddle_node", (2, 0): "rational_positive"}


# ----------------------------------------------------------------------------
# S12, S15 and the homogenized family


def test_s12_and_printed_variant():
    assert build_family(FamilySpec("S12")).multiplicity() >= 1
    F = projectivize(build_family(FamilySpec("S12_printed")))
    assert F.degree == 4


def test_s15_first_blowup_dicritical():
    T = reduce(build_family(FamilySpec("S15")))
    assert T.root.dicritical


@pytest.mark.parametrize("Q, n0", [("y^2", 2), ("y*z", 2), ("z^2", 1), ("y^2 + z^2", 1)])
def test_homogenized_family(Q, n0):
    p = FamilySpec("homogenized", {"Q": Q}).resolved()
    assert homogenized_n0(p) == n0
    F = homogenized_saddle_node(p)
    assert F == projectivize(build_family(FamilySpec("homogenized", {"Q": Q})))
    assert restrict_to_chart(F, "x").same_as(build_family(FamilySpec("homogenized", {"Q": Q})))


@pytest.mark.parametrize("Q, eps", [(q, e) for q in ("y^2", "y*z", "z^2", "y^2 + z^2") for e in (0, 1)])
def test_homogenized_point_at_infinity(Q, eps):
    # n0 < d: dicritical; n0 = d: a saddle-node with weak separatrix in the divisor
    p = FamilySpec("homogenized", {"Q": Q, "eps": eps}).resolved()
    T = reduce(local_at(homogenized_saddle_node(p), (0, 0, 1)))
    assert not T.unresolved
    if homogenized_n0(p) < p["d"]:
        assert T.root.dicritical
    else:
        assert not any(n.dicritical for n in T.nodes)
        assert any(n.kind == "saddle_node" and n.weak_in_divisor for n in T.final_points())
        assert not type_predicates(T).is_second_type
