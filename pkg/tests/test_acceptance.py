"""Acceptance suite: one group of tests per published criterion.

Run ``pytest tests/test_acceptance.py -v``; the terminal summary prints one
PASS/FAIL line per criterion.  Two criteria compare against printed displays
that carry a sign slip; the literal comparison is kept as a strict xfail and
the corrected statement is tested next to it.
"""

from __future__ import annotations

import random
import time
from fractions import Fraction

import pytest

from foliation_lab.algebra import MultiPoly, parse_poly
from foliation_lab.birational import euler_projectivization, linear_map, pipeline_section3, pullback, rho
from foliation_lab.corpus import S9_LEAVES, SEED, corpus_trees
from foliation_lab.errors import NonIsolated
from foliation_lab.families import (CONIC_DISPLAY, OMEGA2, OMEGA2_TWO_BLOWUPS, OMEGA3, OMEGA_TILDE,
                                    FamilySpec, build_family, degree5_display, projectivize, s9_cusp,
                                    s9_cusp_check, s9_separatrix_residual, s9_weak_separatrix)
from foliation_lab.foliation import YZ, LocalFoliation, ProjFoliation, is_invariant, restrict_to_chart
from foliation_lab.local import (colength, contact_order, cs_index_smooth, gsv_index_smooth, ideal_member,
                                 line_index_sums, local_at, milnor_fulton, singular_points)
from foliation_lab.pencils import (conic_pencil, degree5_pencil, foliation_from_pencil, shear_foliation,
                                   shear_pencil, unique_point_pencil, verify_first_integral)
from foliation_lab.reduction import (divisor_cs_sum, essen_holds_everywhere, foliation_type_predicates,
                                     reduce, type_predicates)
from foliation_lab.separatrix import gevrey_fit, solve_separatrix, solve_w_ode, w_residual


def _flip(L: LocalFoliation, sy: int, sz: int) -> LocalFoliation:
    """Pull back by (y, z) -> (sy y, sz z)."""
    y, z = MultiPoly.gens(YZ)
    sub = {"y": y * sy, "z": z * sz}
    return LocalFoliation(L.a.substitute(sub, YZ) * sy, L.b.substitute(sub, YZ) * sz)


def _only_point(F):
    C = singular_points(F)
    assert C.complete
    assert len(C.points) == 1
    return C.points[0]


# -- 1 ------------------------------------------------------------------------

@pytest.mark.criterion(1)
def test_pipeline_reproduces_omega_tilde():
    t = time.perf_counter()
    F = pipeline_section3()
    elapsed = time.perf_counter() - t
    target = ProjFoliation.parse(OMEGA_TILDE)
    # same_as is structural equality after joint normalization, i.e. equality up to one scalar
    assert F.same_as(target)
    assert F.degree == 7
    assert elapsed < 5


# -- 2 ------------------------------------------------------------------------

@pytest.mark.criterion(2)
def test_omega_tilde_census():
    F = ProjFoliation.parse(OMEGA_TILDE)
    p = _only_point(F)
    assert tuple(p.coordinates) == (0, 0, 1)
    assert p.multiplicity == 4
    assert p.milnor == 57 == F.degree ** 2 + F.degree + 1


@pytest.mark.criterion(2)
def test_omega_tilde_x_invariant():
    assert is_invariant(ProjFoliation.parse(OMEGA_TILDE), parse_poly("x"))


# -- 3 ------------------------------------------------------------------------

@pytest.mark.criterion(3)
@pytest.mark.xfail(strict=True, reason="printed display differs from the pencil foliation by x -> -x")
def test_conic_pencil_matches_display_literally():
    F, _ = foliation_from_pencil(conic_pencil())
    assert F.same_as(ProjFoliation.parse(CONIC_DISPLAY))


@pytest.mark.criterion(3)
def test_conic_pencil_matches_display_after_x_sign():
    F, _ = foliation_from_pencil(conic_pencil())
    G = pullback(ProjFoliation.parse(CONIC_DISPLAY), linear_map([[-1, 0, 0], [0, 1, 0], [0, 0, 1]]))
    assert F.same_as(G)
    assert F.degree == 1


@pytest.mark.criterion(3)
def test_conic_pencil_unique_point():
    F, _ = foliation_from_pencil(conic_pencil())
    p = _only_point(F)
    assert p.milnor == 3


# -- 4 ------------------------------------------------------------------------

@pytest.mark.criterion(4)
@pytest.mark.parametrize("n", [2, 3, 4])
def test_unique_point_pencil(n):
    t = time.perf_counter()
    F, _ = foliation_from_pencil(unique_point_pencil(n))
    p = _only_point(F)
    elapsed = time.perf_counter() - t
    assert F.degree == 2 * n
    assert p.multiplicity == 2 * n - 1
    assert p.milnor == 4 * n * n + 2 * n + 1
    assert elapsed < 30


# -- 5 ------------------------------------------------------------------------

@pytest.mark.criterion(5)
@pytest.mark.parametrize("d", [2, 3, 4])
def test_shear_pencil(d):
    rng = random.Random(SEED + 50 + d)
    for _ in range(2):
        cs = [rng.randint(1, 9)] + [rng.randint(-9, 9) for _ in range(d)]
        P = MultiPoly(YZ, {(d - i, i): c for i, c in enumerate(cs) if c})
        F = shear_foliation(P)
        assert verify_first_integral(F, shear_pencil(P))
        _only_point(F)


# -- 6 ------------------------------------------------------------------------

@pytest.fixture(scope="module")
def degree5():
    return foliation_from_pencil(degree5_pencil(3, 4, 4, 4))[0]


@pytest.mark.criterion(6)
@pytest.mark.xfail(strict=True, reason="display is the chart x=1 form with (y,z) -> (-y,-z); the point is (1:0:0)")
def test_degree5_literal(degree5):
    L = restrict_to_chart(degree5, "z")
    assert L.same_as(degree5_display(3, 4, 4, 4))
    assert tuple(_only_point(degree5).coordinates) == (0, 0, 1)


@pytest.mark.criterion(6)
def test_degree5_display_up_to_sign(degree5):
    L = restrict_to_chart(degree5, "x")
    assert L.same_as(_flip(degree5_display(3, 4, 4, 4), -1, -1))
    assert degree5.degree == 5
    assert tuple(_only_point(degree5).coordinates) == (1, 0, 0)


# -- 7 ------------------------------------------------------------------------

@pytest.mark.criterion(7)
def test_omega2_reduction():
    T = reduce(LocalFoliation.parse(OMEGA2))
    assert T.blowups() == 2
    target = LocalFoliation.parse(OMEGA2_TWO_BLOWUPS)
    # the chart form agrees with the display after z -> -z on the second exceptional chart
    assert any(_flip(n.local, 1, s).same_as(target) for n in T.nodes if n.depth == 2 for s in (1, -1))
    assert any(n.kind == "saddle_node" and len(n.components) == 2 and n.weak_in_divisor
               for n in T.final_points())
    assert not type_predicates(T).is_second_type


@pytest.mark.criterion(7)
def test_omega3_reduction():
    T = reduce(LocalFoliation.parse(OMEGA3))
    assert T.blowups() == 4
    assert not T.unresolved
    assert not type_predicates(T).is_second_type


# -- 8 ------------------------------------------------------------------------

@pytest.fixture(scope="module")
def nilpotent_point():
    F = build_family(FamilySpec("nilpotent", {"d": 3, "alpha": 1, "beta": 1}))
    p = _only_point(F)
    L = local_at(F, (1, 0, 0))
    S1 = solve_separatrix(L, [0, 0, Fraction(1, 2)], 60)
    S2 = solve_separatrix(L, [0, 0, 1], 60)
    return p, L, S1, S2


def _curve(S):
    y = MultiPoly.var("y", YZ)
    return y - MultiPoly(YZ, {(0, k): c for k, c in enumerate(S.coefficients()) if c})


@pytest.mark.criterion(8)
def test_nilpotent_point(nilpotent_point):
    p = nilpotent_point[0]
    assert tuple(p.coordinates) == (1, 0, 0)
    assert p.linear_class == "nilpotent"
    assert p.milnor == 13


@pytest.mark.criterion(8)
def test_nilpotent_indices(nilpotent_point):
    _, L, S1, S2 = nilpotent_point
    assert gsv_index_smooth(L, S1) == 2
    assert gsv_index_smooth(L, S2) == 12
    assert cs_index_smooth(L, S1) == 0
    assert cs_index_smooth(L, S2) == 1
    assert contact_order(S1, S2) == 2


@pytest.mark.criterion(8)
def test_nilpotent_ideal_membership(nilpotent_point):
    _, L, S1, S2 = nilpotent_point
    f1, f2 = _curve(S1), _curve(S2)
    I = [L.a, L.b]
    assert ideal_member(f1 * f2, I)
    assert not ideal_member(f1, I)
    assert not ideal_member(f2, I)


# -- 9 ------------------------------------------------------------------------

@pytest.mark.criterion(9)
def test_w_series():
    t = time.perf_counter()
    W = solve_w_ode(3, 1, 1, 50)
    assert len(W.coeffs) == 50
    assert w_residual(3, 1, 1, W).is_zero()
    fit = gevrey_fit(W.coeffs)
    assert 0.35 <= fit.s_hat <= 0.65
    assert time.perf_counter() - t < 10


# -- 10 -----------------------------------------------------------------------

def _s9_params(k):
    rng = random.Random(SEED + 100 + k)
    return {name: Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for name in ("a2", "a1", "a0")}


@pytest.mark.criterion(10)
@pytest.mark.parametrize("k", [0, 1, 2])
def test_s9_random_parameters(k):
    params = _s9_params(k)
    T = reduce(build_family(FamilySpec("S9", dict(params, a=1, b=1))))
    assert sorted(T.leaf_descriptors(), key=repr) == sorted(S9_LEAVES, key=repr)
    assert not type_predicates(T).is_second_type
    assert s9_cusp_check(params)
    assert not s9_cusp_check(params, s9_cusp(params, constant=7))
    assert not s9_separatrix_residual(params, s9_weak_separatrix(params))


@pytest.mark.criterion(10)
def test_s15_first_blowup_dicritical():
    T = reduce(build_family(FamilySpec("S15")))
    assert T.nodes[0].dicritical


# -- 11 -----------------------------------------------------------------------

def _worked_locals():
    out = [LocalFoliation.parse(OMEGA2), LocalFoliation.parse(OMEGA3)]
    for F in (ProjFoliation.parse(OMEGA_TILDE), build_family(FamilySpec("nilpotent")),
              build_family(FamilySpec("X2")), build_family(FamilySpec("X3")),
              euler_projectivization(), foliation_from_pencil(conic_pencil())[0]):
        out.extend(p.local for p in singular_points(F).points)
    for fam in ("S9", "S9b", "S11", "S12", "S15", "homogenized"):
        out.append(build_family(FamilySpec(fam)))
    return out


@pytest.mark.criterion(11)
def test_fulton_equals_colength_on_examples():
    examples = _worked_locals()
    assert len(examples) >= 10
    for L in examples:
        assert milnor_fulton(L) == colength([L.a, L.b]), str(L)


def _random_local(rng):
    while True:
        polys = []
        for _ in range(2):
            terms = {}
            for _ in range(rng.randint(2, 5)):
                i, j = rng.randint(0, 4), rng.randint(0, 4)
                if 0 < i + j <= 5:
                    terms[(i, j)] = rng.randint(-3, 3)
            polys.append(MultiPoly(YZ, {e: c for e, c in terms.items() if c}))
        if all(polys):
            try:
                return LocalFoliation(*polys)
            except Exception:
                continue


@pytest.mark.criterion(11)
def test_fulton_equals_colength_random():
    rng = random.Random(SEED + 111)
    checked = 0
    while checked < 25:
        L = _random_local(rng)
        try:
            mu = milnor_fulton(L)
        except NonIsolated:
            continue
        if mu > 30:
            continue
        assert mu == colength([L.a, L.b]), str(L)
        checked += 1


# -- 12 -----------------------------------------------------------------------

@pytest.mark.criterion(12)
@pytest.mark.parametrize("line", ["x", "y"])
def test_euler_line_index_sums(line):
    F = euler_projectivization()
    cs, gsv = line_index_sums(F, parse_poly(line))
    t = 1
    assert cs == t * t
    assert gsv == (F.degree + 2) * t - t * t


@pytest.fixture(scope="module")
def trees():
    return corpus_trees()


@pytest.mark.criterion(12)
def test_essen_relation_on_corpus(trees):
    assert len(trees) >= 10
    for name, T in trees.items():
        assert essen_holds_everywhere(T), name


@pytest.mark.criterion(12)
def test_divisor_cs_sum_is_self_intersection(trees):
    for name, T in trees.items():
        for c in T.components.values():
            if not c.dicritical:
                assert divisor_cs_sum(T, c.id) == c.self_intersection, (name, c.id)


# -- 13 -----------------------------------------------------------------------

RHO_CASES = {
    "euler": euler_projectivization,
    "X2": lambda: build_family(FamilySpec("X2")),
    "X3": lambda: build_family(FamilySpec("X3")),
    "nilpotent": lambda: build_family(FamilySpec("nilpotent")),
    "conic": lambda: foliation_from_pencil(conic_pencil())[0],
    "S9": lambda: projectivize(build_family(FamilySpec("S9"))),
    "S15": lambda: projectivize(build_family(FamilySpec("S15"))),
}


@pytest.mark.criterion(13)
@pytest.mark.parametrize("name", sorted(RHO_CASES))
def test_second_type_preserved_by_rho(name):
    F = RHO_CASES[name]()
    before = foliation_type_predicates(F).is_second_type
    after = foliation_type_predicates(pullback(F, rho())).is_second_type
    assert before == after
