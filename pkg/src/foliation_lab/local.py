"""Singular points, Milnor numbers, colengths and the CS / GSV / BB indices."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import MultiPoly, TruncSeries, compose_poly, poly_gcd, rational_roots, resultant
from .algebra.poly import Rational, exact_quotient, rat
from .errors import (Indistinguishable, InsufficientTruncation, NonIsolated, NonIsolatedSingularity,
                     NotFinite, NotReduced, PreconditionFailed)
from .foliation import XYZ, YZ, LocalFoliation, ProjFoliation
from .separatrix import SeparatrixSeries, kernel_direction, linear_part, separatrix_along

LINEAR_CLASSES = ("hyperbolic_nonresonant", "hyperbolic_resonant", "rational_positive",
                  "saddle_node", "nilpotent", "zero_linear_part")


# ----------------------------------------------------------------------------
# linear part


@dataclass(frozen=True)
class EigenData:
    """Characteristic polynomial ``t^2 - trace t + det`` of the linear part."""

    trace: Rational
    det: Rational

    @property
    def discriminant(self) -> Rational:
        return self.trace * self.trace - 4 * self.det

    def ratio_is_rational(self) -> bool:
        """Whether lambda1/lambda2 is rational (det != 0)."""
        return self.trace == 0 or _is_rational_square(self.discriminant)

    def rational_eigenvalues(self) -> Optional[Tuple[Rational, Rational]]:
        if not _is_rational_square(self.discriminant):
            return None
        r = _rational_sqrt(self.discriminant)
        return (rat(Fraction(self.trace + r) / 2), rat(Fraction(self.trace - r) / 2))


def _is_rational_square(q) -> bool:
    return _rational_sqrt(q) is not None


def _rational_sqrt(q) -> Optional[Rational]:
    q = Fraction(q)
    if q < 0:
        return None
    n, d = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return rat(Fraction(n, d))
    return None


def eigen_data(L: LocalFoliation) -> EigenData:
    (p, q), (r, s) = linear_part(L)
    return EigenData(rat(p + s), rat(p * s - q * r))


def classify_linear(L: LocalFoliation) -> str:
    (p, q), (r, s) = linear_part(L)
    if not (p or q or r or s):
        return "zero_linear_part"
    E = eigen_data(L)
    if E.det == 0:
        return "nilpotent" if E.trace == 0 else "saddle_node"
    if not E.ratio_is_rational():
        return "hyperbolic_nonresonant"
    if E.trace == 0:
        return "hyperbolic_resonant"  # ratio -1
    l1, l2 = E.rational_eigenvalues()
    return "rational_positive" if Fraction(l1) / Fraction(l2) > 0 else "hyperbolic_resonant"


def is_reduced(L: LocalFoliation) -> bool:
    return classify_linear(L) in ("hyperbolic_nonresonant", "hyperbolic_resonant", "saddle_node")


# ----------------------------------------------------------------------------
# Milnor number (Fulton) and colength (Macaulay)


def _z_restriction(f: MultiPoly) -> Dict[int, Rational]:
    """Coefficients of f(y, 0) keyed by y-degree."""
    return {e[0]: c for e, c in f.terms.items() if e[1] == 0}


def _split_z(f: MultiPoly) -> Tuple[int, MultiPoly]:
    k = min(e[1] for e in f.terms)
    if not k:
        return 0, f
    return k, MultiPoly(YZ, {(e[0], e[1] - k): c for e, c in f.terms.items()}, _trusted=True)


def intersection_multiplicity(f: MultiPoly, g: MultiPoly, bound: int | None = None) -> int:
    """Local intersection number of ``f = 0`` and ``g = 0`` at the origin of (y, z).

    Fulton's algorithm: while both restrictions to ``z = 0`` are nonzero, lower
    the larger one by a multiple of the other; when one of them vanishes, split
    off the factor ``z`` (contributing the order of the other along ``z = 0``).

    Terms of degree >= ``prec`` are dropped.  With ``prec`` above the remaining
    intersection number, the maximal ideal power ``m^(prec-1)`` lies in the
    local ideal, so such terms do not change it.  Splitting off ``z^k`` costs k
    of precision and lowers the remaining number by at least k, so the bound
    set from Bezout (deg f * deg g + 1) stays valid throughout.  A caller that
    knows an upper bound for the answer may pass it as ``bound``; the
    resultant bound is then skipped.
    """
    F, G = f.with_vars(YZ).primitive(), g.with_vars(YZ).primitive()
    if not F or not G:
        raise NonIsolated("the zero polynomial contains every curve")
    prec = F.total_degree() * G.total_degree()
    prec = min(prec, bound if bound is not None else _resultant_bound(F, G)) + 1
    F, G = F.truncate(prec), G.truncate(prec)
    total = 0
    while True:
        if F.constant_term() or G.constant_term():
            return total
        if not F or not G:
            raise NonIsolated("the curves share a component through the origin")
        rF, rG = _z_restriction(F), _z_restriction(G)
        if not rF and not rG:
            raise NonIsolated("both curves contain z = 0")
        if not rF or not rG:
            if not rF:
                F, G, rF, rG = G, F, rG, rF
            # now G(y,0) == 0
            k, G = _split_z(G)
            total += k * min(rF)
            prec -= k
            F, G = F.truncate(prec), G.truncate(prec)
            continue
        r, s = max(rF), max(rG)
        if r > s:
            F, G, rF, rG, r, s = G, F, rG, rF, s, r
        shift = MultiPoly(YZ, {(s - r, 0): rG[s]}, _trusted=True)
        G = (G * rF[r] - F * shift).truncate(prec).primitive()


def _resultant_bound(F: MultiPoly, G: MultiPoly) -> float:
    """An upper bound for the local intersection number, or infinity.

    When the leading y-coefficient of one curve does not vanish at ``z = 0``,
    ``ord_z Res_y`` sums the intersection numbers over the whole line ``z = 0``.
    """
    from .algebra.gcd import to_upoly

    for P in (F, G):
        lead = to_upoly(P, "y")[-1]
        if lead.constant_term():
            R = resultant(F, G, "y")
            if R:
                return R.order()
    return math.inf


def milnor_fulton(L: LocalFoliation, bound: int | None = None) -> int:
    L0 = L.at_origin()
    return intersection_multiplicity(L0.a, L0.b, bound)


def _translate(f: MultiPoly, point) -> MultiPoly:
    f = f.with_vars(YZ)
    y0, z0 = point
    if not y0 and not z0:
        return f
    y, z = MultiPoly.gens(YZ)
    return f.substitute({"y": y + y0, "z": z + z0}, YZ)


_PRIMES = (2305843009213693951, 4611686018427387847)


def _truncated_quotient_dim(gens: Sequence[MultiPoly], D: int, p: int) -> int:
    """dim C[y,z] / (I + m^D) computed as a rank over GF(p)."""
    index = {}
    for deg in range(D):
        for i in range(deg, -1, -1):
            index[(i, deg - i)] = len(index)
    ncols = len(index)
    pivots: Dict[int, Dict[int, int]] = {}
    for g in gens:
        terms = [(e, c) for e, c in g.terms.items() if e[0] + e[1] < D]
        if not terms:
            continue
        lo = min(e[0] + e[1] for e, _ in terms)
        terms = [(e, _mod(c, p)) for e, c in terms]
        for mdeg in range(D - lo):
            for i in range(mdeg, -1, -1):
                j = mdeg - i
                row = {}
                for (a, b), c in terms:
                    if a + b + mdeg < D and c:
                        row[index[(a + i, b + j)]] = c
                _insert(row, pivots, p)
                if len(pivots) == ncols:
                    return 0
    return ncols - len(pivots)


def _mod(c, p) -> int:
    c = Fraction(c)
    return c.numerator * pow(c.denominator, -1, p) % p


def _insert(row: Dict[int, int], pivots: Dict[int, Dict[int, int]], p: int) -> None:
    while row:
        col = min(row)
        piv = pivots.get(col)
        if piv is None:
            inv = pow(row[col], -1, p)
            pivots[col] = {k: v * inv % p for k, v in row.items()}
            return
        f = row[col]
        for k, v in piv.items():
            nv = (row.get(k, 0) - f * v) % p
            if nv:
                row[k] = nv
            else:
                row.pop(k, None)


def colength(gens: Sequence[MultiPoly], point=(0, 0), cap: int | None = None) -> int:
    """dim of the local quotient ring at ``point`` by the ideal ``gens``.

    Computes ``dim C[y,z]/(I + m^D)`` for growing D; once two consecutive
    bounds give the same value, Nakayama's lemma shows ``m^D`` lies in the
    local ideal and the value is the colength.  Ranks are taken modulo two
    large primes (the larger rank is kept).
    """
    gs = [_translate(g, point) for g in gens if g]
    if any(g.constant_term() for g in gs):
        return 0
    if not gs:
        raise NotFinite("the zero ideal has infinite colength")
    if cap is None:
        degs = sorted(max(g.total_degree(), 1) for g in gs)
        bezout = degs[0] * degs[1] if len(degs) > 1 else degs[0]
        cap = 3 * bezout + 10

    def dim(D):
        return min(_truncated_quotient_dim(gs, D, p) for p in _PRIMES)

    D = max(2, min(g.order() for g in gs) + 1)
    prev = dim(D)
    while D <= cap:
        step = max(1, D // 2)
        cur = dim(D + step)
        if cur == prev:
            # equal values across a gap imply equality at consecutive bounds too
            return cur
        D += step
        prev = cur
    raise NotFinite(f"colength did not stabilise below degree {cap}")


def ideal_member(f: MultiPoly, gens: Sequence[MultiPoly], point=(0, 0)) -> bool:
    return colength(list(gens), point) == colength(list(gens) + [f], point)


def tjurina(f: MultiPoly, point=(0, 0)) -> int:
    f = f.with_vars(YZ)
    return colength([f, f.diff("y"), f.diff("z")], point)


# ----------------------------------------------------------------------------
# census


@dataclass(frozen=True)
class SingularPoint:
    coordinates: Tuple[Rational, Rational, Rational]
    chart: str
    multiplicity: int
    milnor: int
    linear_class: str
    eigen_data: EigenData
    local: LocalFoliation = field(compare=False, repr=False)


@dataclass(frozen=True)
class SingularCensus:
    points: Tuple[SingularPoint, ...]
    milnor_mass_found: int
    milnor_mass_expected: int

    @property
    def complete(self) -> bool:
        return self.milnor_mass_found == self.milnor_mass_expected

    @property
    def deficit(self) -> int:
        return self.milnor_mass_expected - self.milnor_mass_found


def _chart_pair(F: ProjFoliation, chart: str) -> Tuple[MultiPoly, MultiPoly]:
    """The two chart coefficients, renamed to (y, z), without clearing factors."""
    rest = [v for v in XYZ if v != chart]
    out = []
    for v in rest:
        c = F.coeffs[XYZ.index(v)].substitute({chart: 1}, XYZ)
        terms = {(e[XYZ.index(rest[0])], e[XYZ.index(rest[1])]): k for e, k in c.terms.items()}
        out.append(MultiPoly(YZ, terms))
    return out[0], out[1]


def _check_isolated(a: MultiPoly, b: MultiPoly, chart: str) -> None:
    if not a and not b:
        raise NonIsolatedSingularity(f"every point of chart {chart} is singular")
    if a and b:
        g = poly_gcd(a, b)
        if not g.is_constant():
            raise NonIsolatedSingularity(f"chart {chart} coefficients share the factor {g}")
    else:
        nz = a or b
        if not nz.is_constant():
            raise NonIsolatedSingularity(f"chart {chart}: one coefficient vanishes identically")


def _affine_zeros(a: MultiPoly, b: MultiPoly) -> List[Tuple[Rational, Rational]]:
    """Rational common zeros of two coprime polynomials in (y, z)."""
    r = resultant(a, b, "y")
    if not r:
        raise NonIsolatedSingularity("resultant vanishes identically")
    pts = []
    if r.is_constant():
        return pts
    for z0 in rational_roots(r, "z"):
        ay = a.substitute({"z": z0}, YZ)
        by = b.substitute({"z": z0}, YZ)
        g = poly_gcd(ay, by) if ay and by else (ay or by)
        if not g:
            raise NonIsolatedSingularity(f"z = {z0} is a common component")
        if g.is_constant():
            continue
        for y0 in rational_roots(g, "y"):
            pts.append((rat(y0), rat(z0)))
    return pts


def _univariate_zeros(a: MultiPoly, b: MultiPoly, var: str) -> List[Rational]:
    g = poly_gcd(a, b) if a and b else (a or b)
    if not g:
        return None
    if g.is_constant():
        return []
    return [rat(r) for r in rational_roots(g, var)]


def analyse_point(L: LocalFoliation) -> Tuple[int, int, str, EigenData]:
    L0 = L.at_origin()
    return (L0.multiplicity(), milnor_fulton(L0), classify_linear(L0), eigen_data(L0))


def local_at(F: ProjFoliation, point) -> LocalFoliation:
    """Local form at a projective point, in the first chart containing it."""
    point = tuple(rat(c) for c in point)
    for i, chart in enumerate(XYZ):
        if point[i]:
            scaled = tuple(rat(Fraction(c) / Fraction(point[i])) for c in point)
            a, b = _chart_pair(F, chart)
            rest = tuple(c for j, c in enumerate(scaled) if j != i)
            rest_names = tuple(v for v in XYZ if v != chart)
            return LocalFoliation(a, b, chart=chart, base_point=rest, coords=rest_names).at_origin()
    raise ValueError("(0:0:0) is not a projective point")


def singular_points(F: ProjFoliation) -> SingularCensus:
    """Rational singular points of F with multiplicity, Milnor number and linear class."""
    found: List[SingularPoint] = []

    def add(chart, coords, local_pt, a, b):
        rest_names = tuple(v for v in XYZ if v != chart)
        L = LocalFoliation(a, b, chart=chart, base_point=local_pt, coords=rest_names).at_origin()
        m, mu, cls, ed = analyse_point(L)
        found.append(SingularPoint(coords, chart, m, mu, cls, ed, L))

    # chart x = 1: every point (1 : y : z)
    a, b = _chart_pair(F, "x")
    _check_isolated(a, b, "x")
    for y0, z0 in _affine_zeros(a, b):
        add("x", (1, y0, z0), (y0, z0), a, b)
    # chart y = 1, points on x = 0: (0 : 1 : z); local coordinates (x, z)
    a, b = _chart_pair(F, "y")
    _check_isolated(a, b, "y")
    a0 = a.substitute({"y": 0}, YZ)   # local y stands for x
    b0 = b.substitute({"y": 0}, YZ)
    zs = _univariate_zeros(a0, b0, "z")
    if zs is None:
        raise NonIsolatedSingularity("the line x = 0 is singular")
    for z0 in zs:
        add("y", (0, 1, z0), (0, z0), a, b)
    # chart z = 1, the point (0 : 0 : 1)
    if all(not c(0, 0, 1) for c in F.coeffs):
        a, b = _chart_pair(F, "z")
        _check_isolated(a, b, "z")
        add("z", (0, 0, 1), (0, 0), a, b)
    d = F.degree
    return SingularCensus(tuple(found), sum(p.milnor for p in found), d * d + d + 1)


# ----------------------------------------------------------------------------
# indices


@dataclass(frozen=True)
class IndexValue:
    kind: str
    value: Rational
    separatrix: str = ""


def _curve_data(L: LocalFoliation, S: SeparatrixSeries):
    L0 = S.oriented(L.at_origin())
    h = S.h
    z = TruncSeries.variable(h.order, h.var)
    A = compose_poly(L0.a, [h, z])
    B = compose_poly(L0.b, [h, z])
    return L0, h, z, A, B


def _valuation(s: TruncSeries):
    v = s.valuation()
    return math.inf if v is None else v


def gsv_index_smooth(L: LocalFoliation, S: SeparatrixSeries) -> int:
    """``min(ord a(h,z), ord b(h,z))`` along the smooth separatrix ``S``."""
    _, h, _, A, B = _curve_data(L, S)
    v = min(_valuation(A), _valuation(B))
    if v == math.inf:
        raise InsufficientTruncation(f"both restrictions vanish to order {h.order}")
    return v


def cs_index_smooth(L: LocalFoliation, S: SeparatrixSeries) -> Rational:
    """Camacho-Sad index of the smooth separatrix ``S``.

    After ``y -> y + h(z)`` the form is ``A dy + B dz`` with ``B = y B~``;
    the index is the residue at ``z = 0`` of ``-B~(0,z) / A(0,z)``.
    """
    L0, h, z, A, _ = _curve_data(L, S)
    hp = h.derivative()
    n = hp.order
    Bt = compose_poly(L0.a.diff("y"), [h, z]).truncate(n) * hp \
        + compose_poly(L0.b.diff("y"), [h, z]).truncate(n)
    v = A.valuation()
    if v is None:
        raise InsufficientTruncation(f"a vanishes along the curve to order {h.order}")
    if v == 0:
        return 0
    if 2 * v - 1 > h.order or v - 1 > n:
        raise InsufficientTruncation(f"need truncation order {2 * v - 1}, have {h.order}")
    u = A.shift(-v).truncate(v - 1).inverse()
    return rat(-(Bt.truncate(v - 1) * u)[v - 1])


def contact_order(S1: SeparatrixSeries, S2: SeparatrixSeries) -> int:
    """Intersection number of two smooth formal branches at the origin."""
    h1, h2 = S1.h, S2.h
    if S1.solved_for == S2.solved_for:
        diff = h1.truncate(min(h1.order, h2.order)) - h2.truncate(min(h1.order, h2.order))
        v = diff.valuation()
        if v is None:
            raise Indistinguishable(f"the series agree to order {diff.order}")
        return v
    # y = h1(z) against z = h2(y): parametrise the second by y = t
    if S1.solved_for == "z":
        h1, h2 = h2, h1
    n = min(h1.order, h2.order)
    t = TruncSeries.variable(n, "t")
    z_of_t = TruncSeries(h2.coeffs, n, "t")
    h1t = compose_poly(MultiPoly(("z",), {(k,): c for k, c in enumerate(h1.coeffs[: n + 1]) if c}), [z_of_t])
    v = (t - h1t).valuation()
    if v is None:
        raise Indistinguishable(f"the branches agree to order {n}")
    return v


def weak_separatrix(L: LocalFoliation, N: int) -> SeparatrixSeries:
    """Formal separatrix of a saddle-node tangent to the zero eigendirection."""
    if classify_linear(L) != "saddle_node":
        raise NotReduced("not a saddle-node")
    return separatrix_along(L, kernel_direction(L), N)


def strong_separatrix(L: LocalFoliation, N: int) -> SeparatrixSeries:
    """Separatrix of a saddle-node tangent to the nonzero eigendirection."""
    if classify_linear(L) != "saddle_node":
        raise NotReduced("not a saddle-node")
    (p, q), (r, s) = linear_part(L)
    # image of J is spanned by the eigenvector of the nonzero eigenvalue
    v = (p, r) if (p or r) else (q, s)
    return separatrix_along(L, (rat(v[0]), rat(v[1])), N)


def saddle_node_data(L: LocalFoliation) -> Tuple[int, Rational]:
    """``(k, lambda)``: Milnor number ``k + 1`` and CS index of the weak separatrix."""
    mu = milnor_fulton(L)
    k = mu - 1
    N = 2 * (k + 2) + 4
    W = weak_separatrix(L, N)
    return k, cs_index_smooth(L, W)


def bb_index_reduced(L: LocalFoliation) -> Rational:
    """Baum-Bott index at a hyperbolic point or a saddle-node."""
    cls = classify_linear(L)
    E = eigen_data(L)
    if cls in ("hyperbolic_nonresonant", "hyperbolic_resonant"):
        return rat(Fraction(E.trace) ** 2 / Fraction(E.det))
    if cls == "saddle_node":
        k, lam = saddle_node_data(L)
        return rat(2 * k + 2 + lam)
    raise NotReduced(f"linear class {cls} is not reduced")


def bb_from_separatrices(L: LocalFoliation, seps: Sequence[SeparatrixSeries]) -> Rational:
    """``CS(union) + 2 GSV(union)`` for a full set of smooth separatrices."""
    cs = sum(Fraction(cs_index_smooth(L, S)) for S in seps)
    gsv = sum(gsv_index_smooth(L, S) for S in seps)
    for i in range(len(seps)):
        for j in range(i + 1, len(seps)):
            c = contact_order(seps[i], seps[j])
            cs += 2 * c
            gsv -= 2 * c
    return rat(cs + 2 * gsv)


# ----------------------------------------------------------------------------
# index sums along an invariant line


def line_germ(p: SingularPoint, line: MultiPoly, order: int) -> SeparatrixSeries:
    """The line through ``p`` as a smooth curve germ in p's local chart."""
    rest = [v for v in XYZ if v != p.chart]
    base = [c for v, c in zip(XYZ, p.coordinates) if v != p.chart]
    scale = Fraction(p.coordinates[XYZ.index(p.chart)])
    y, z = MultiPoly.gens(YZ)
    sub = {p.chart: MultiPoly.const(1, YZ),
           rest[0]: y + Fraction(base[0]) / scale, rest[1]: z + Fraction(base[1]) / scale}
    ell = line.with_vars(XYZ).substitute(sub, YZ)
    if ell.constant_term():
        raise PreconditionFailed("the line does not pass through the point")
    cy, cz = ell.terms.get((1, 0), 0), ell.terms.get((0, 1), 0)
    if cy:
        return SeparatrixSeries(TruncSeries([0, -Fraction(cz) / Fraction(cy)], order), "line")
    return SeparatrixSeries(TruncSeries([], order, "y"), "line", solved_for="z")


def line_index_sums(F: ProjFoliation, line: MultiPoly) -> Tuple[Rational, int]:
    """``(sum CS, sum GSV)`` of an invariant line over its singular points."""
    from .foliation import is_invariant

    line = line.with_vars(XYZ)
    if not line.is_homogeneous() or line.total_degree() != 1:
        raise PreconditionFailed("expected a linear form")
    if not is_invariant(F, line):
        raise PreconditionFailed(f"{line} is not invariant")
    census = singular_points(F)
    if not census.complete:
        raise PreconditionFailed(f"Milnor mass deficit {census.deficit}")
    cs, gsv = Fraction(0), 0
    for p in census.points:
        if line(*p.coordinates):
            continue
        order = 2 * (p.milnor + F.degree + 1) + 4
        S = line_germ(p, line, order)
        cs += Fraction(cs_index_smooth(p.local, S))
        gsv += gsv_index_smooth(p.local, S)
    return rat(cs), gsv
