"""Point blow-ups and the reduction of singularities of local foliations."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .algebra import MultiPoly, poly_gcd, rational_roots
from .algebra.poly import Rational, fmt_rat, rat
from .errors import DepthExceeded, NonIsolated, PreconditionFailed, RegularPoint, Unresolved
from .foliation import YZ, LocalFoliation
from .local import (EigenData, IndexValue, bb_index_reduced, classify_linear, cs_index_smooth, eigen_data,
                    gsv_index_smooth, milnor_fulton, saddle_node_data, strong_separatrix, weak_separatrix)
from .separatrix import axis, kernel_direction, linear_part, separatrix_along

CHART_U = "(u,uv)"   # y = u, z = u v; exceptional line u = 0, i.e. local y = 0
CHART_V = "(uv,v)"   # y = u v, z = v; exceptional line v = 0, i.e. local z = 0

DEFAULT_MAX_DEPTH = 12


def max_depth_default() -> int:
    env = os.environ.get("FOLIATION_LAB_MAX_DEPTH")
    return int(env) if env else DEFAULT_MAX_DEPTH


@dataclass(frozen=True)
class BlowupChartForm:
    chart_label: str
    form: LocalFoliation
    divisor_exponent: int
    dicritical: bool


def _is_singular(L: LocalFoliation) -> bool:
    return not L.a.constant_term() and not L.b.constant_term()


def tangent_cone_test(L: LocalFoliation) -> Tuple[int, bool]:
    """Multiplicity and dicriticity (``y a_m + z b_m == 0``) at the origin."""
    m = L.multiplicity()
    y, z = MultiPoly.gens(YZ)
    cone = y * L.a.homogeneous_part(m) + z * L.b.homogeneous_part(m)
    return m, not cone


def blowup(L: LocalFoliation) -> Tuple[BlowupChartForm, BlowupChartForm]:
    """Both standard charts of the blow-up of the origin."""
    L = L.at_origin()
    if not _is_singular(L):
        raise RegularPoint("the origin is not a singular point")
    m, dic = tangent_cone_test(L)
    k = m + 1 if dic else m
    u, v = MultiPoly.gens(YZ)
    out = []
    # y = u, z = u v:  (a + v b) du + u b dv
    a1 = L.a.substitute({"y": u, "z": u * v}, YZ)
    b1 = L.b.substitute({"y": u, "z": u * v}, YZ)
    A, B = a1 + v * b1, u * b1
    out.append(BlowupChartForm(CHART_U, _divide_out(A, B, "y", k, L, CHART_U), k, dic))
    # y = u v, z = v:  a v du + (a u + b) dv
    a2 = L.a.substitute({"y": u * v, "z": v}, YZ)
    b2 = L.b.substitute({"y": u * v, "z": v}, YZ)
    A, B = a2 * v, a2 * u + b2
    out.append(BlowupChartForm(CHART_V, _divide_out(A, B, "z", k, L, CHART_V), k, dic))
    return out[0], out[1]


def _divide_out(A: MultiPoly, B: MultiPoly, var: str, k: int, L: LocalFoliation, label: str) -> LocalFoliation:
    i = YZ.index(var)

    def shift(p):
        terms = {}
        for e, c in p.terms.items():
            if e[i] < k:
                raise AssertionError(f"{var}^{k} does not divide the pulled-back form")
            ee = list(e)
            ee[i] -= k
            terms[tuple(ee)] = c
        return MultiPoly(YZ, terms, _trusted=True)

    # the strict transform of a coprime pair stays coprime, so the gcd step is skipped
    return LocalFoliation.coprime(shift(A), shift(B), chart=L.chart, coords=L.coords,
                                  lineage=L.lineage + (label,))


def _shift_v(F: LocalFoliation, v0) -> LocalFoliation:
    if not v0:
        return F
    y, z = MultiPoly.gens(YZ)
    sub = {"z": z + v0}
    return LocalFoliation.coprime(F.a.substitute(sub, YZ), F.b.substitute(sub, YZ), chart=F.chart,
                                  coords=F.coords, lineage=F.lineage)


def _truncated(F: LocalFoliation, prec: int) -> Tuple[LocalFoliation, bool]:
    a, b = F.a.truncate(prec), F.b.truncate(prec)
    if len(a.terms) == len(F.a.terms) and len(b.terms) == len(F.b.terms):
        return F, False
    if not a or not b:
        raise _LowPrecision
    return LocalFoliation.coprime(a, b, chart=F.chart, coords=F.coords, lineage=F.lineage), True


class _LowPrecision(Exception):
    pass


def _points_on_exceptional(F: LocalFoliation, var: str) -> Tuple[List[Rational], int]:
    """Rational singular points on the line ``var = 0`` and the degree left unexplained."""
    other = "z" if var == "y" else "y"
    a0 = F.a.substitute({var: 0}, YZ)
    b0 = F.b.substitute({var: 0}, YZ)
    if a0 and b0:
        g = poly_gcd(a0, b0)
    else:
        g = a0 or b0
    if not g:
        raise PreconditionFailed("the exceptional line is singular")
    if g.is_constant():
        return [], 0
    roots = [rat(r) for r in rational_roots(g, other)]
    # the square-free part of g has degree (#distinct roots over C)
    sqf = _squarefree_degree(g, other)
    return roots, sqf - len(roots)


def _squarefree_degree(g: MultiPoly, var: str) -> int:
    d = g.diff(var)
    if not d:
        return 0
    h = poly_gcd(g, d)
    return g.degree(var) - h.degree(var)


# ----------------------------------------------------------------------------
# reduction tree


@dataclass
class DivisorComponent:
    id: str
    self_intersection: int = -1
    dicritical: bool = False
    created_at: int = -1


@dataclass
class ReductionNode:
    id: int
    parent: Optional[int]
    depth: int
    trail: Tuple[str, ...]
    local: LocalFoliation = field(repr=False)
    multiplicity: int
    milnor: int
    linear_class: str
    eigen: EigenData
    components: Dict[str, str]     # axis ("y" for y=0, "z" for z=0) -> component id
    kind: str = "pending"          # leaf classification, or "blown_up"
    dicritical: bool = False
    divisor_exponent: int = 0
    children: List[int] = field(default_factory=list)
    irrational_points: int = 0
    saddle_k: Optional[int] = None
    weak_in_divisor: Optional[bool] = None
    precision: Optional[int] = None  # local form exact modulo order >= precision; None if exact

    @property
    def is_leaf(self) -> bool:
        return not self.children and self.kind != "blown_up"

    def to_json(self) -> dict:
        d = {
            "id": self.id, "parent": self.parent, "depth": self.depth, "trail": list(self.trail),
            "multiplicity": self.multiplicity, "milnor": self.milnor, "class": self.linear_class,
            "trace": fmt_rat(self.eigen.trace), "det": fmt_rat(self.eigen.det),
            "components": dict(self.components), "kind": self.kind, "children": list(self.children),
        }
        if self.kind in ("blown_up", "dicritical_contact"):
            d["dicritical"] = self.dicritical
            d["divisor_exponent"] = self.divisor_exponent
        if self.irrational_points:
            d["irrational_points"] = self.irrational_points
        if self.saddle_k is not None:
            d["k"] = self.saddle_k
            d["weak_in_divisor"] = self.weak_in_divisor
        return d


@dataclass
class ReductionTree:
    nodes: List[ReductionNode]
    components: Dict[str, DivisorComponent]
    max_depth: int

    @property
    def root(self) -> ReductionNode:
        return self.nodes[0]

    def leaves(self) -> List[ReductionNode]:
        return [n for n in self.nodes if n.is_leaf]

    def final_points(self) -> List[ReductionNode]:
        """Singular points of the transformed foliation (leaves except dicritical contacts)."""
        return [n for n in self.nodes if not n.children and n.kind not in ("blown_up", "dicritical_contact")]

    @property
    def unresolved(self) -> bool:
        return any(n.kind == "unresolved" or n.irrational_points for n in self.nodes)

    def leaf_kinds(self) -> List[str]:
        return sorted(n.kind for n in self.leaves())

    def leaf_descriptors(self) -> List[Tuple[str, str, Optional[bool]]]:
        """Sorted ``(kind, "corner" | "divisor", weak_in_divisor)`` for every final point."""
        out = []
        for n in self.final_points():
            where = "corner" if len(n.components) >= 2 else "divisor"
            out.append((n.kind, where, n.weak_in_divisor))
        return sorted(out, key=lambda t: (t[0], t[1], str(t[2])))

    def blowups(self) -> int:
        return sum(1 for n in self.nodes if n.kind in ("blown_up", "dicritical_contact"))

    def to_json(self) -> dict:
        return {
            "nodes": [n.to_json() for n in self.nodes],
            "components": [{"id": c.id, "self_intersection": c.self_intersection,
                            "dicritical": c.dicritical, "created_at": c.created_at}
                           for c in self.components.values()],
            "unresolved": self.unresolved,
        }

    def ascii(self) -> str:
        lines = []

        def walk(i, prefix):
            n = self.nodes[i]
            label = n.kind if n.kind != "blown_up" else ("blown_up (dicritical)" if n.dicritical else "blown_up")
            comps = ",".join(f"{v}:{k}=0" for k, v in sorted(n.components.items()))
            extra = f" k={n.saddle_k} weak_in_divisor={n.weak_in_divisor}" if n.saddle_k is not None else ""
            lines.append(f"{prefix}[{n.id}] m={n.multiplicity} mu={n.milnor} {n.linear_class} -> {label}"
                         f"{' on ' + comps if comps else ''}{extra}")
            for c in n.children:
                walk(c, prefix + "  ")

        walk(0, "")
        return "\n".join(lines)


REDUCED_LEAF = {"hyperbolic_nonresonant": "hyperbolic_nonresonant",
                "hyperbolic_resonant": "resonant",
                "saddle_node": "saddle_node"}


def _weak_in_divisor(L: LocalFoliation, comps: Dict[str, str], components: Dict[str, DivisorComponent]) -> bool:
    p, q = kernel_direction(L)
    for ax, cid in comps.items():
        if components[cid].dicritical:
            continue
        # the line y = 0 has direction (0, 1); the line z = 0 has direction (1, 0)
        if (ax == "y" and p == 0) or (ax == "z" and q == 0):
            return True
    return False


def reduce(L: LocalFoliation, max_depth: int | None = None, strict: bool = False) -> ReductionTree:
    """Blow up non-reduced points until every leaf is reduced, dicritical or capped.

    With ``strict`` a reached depth cap raises DepthExceeded; otherwise the
    tree is returned with ``unresolved`` leaves.

    Strict transforms grow fast in degree, so below the root the local forms
    are truncated. A child of a node with Milnor number mu and multiplicity
    nu has Milnor number at most mu - nu^2 + nu + 1 (mu - nu^2 - nu + 1 when
    dicritical); keeping the child exact to two orders beyond that bound
    leaves its Milnor ideal, hence everything read off below, unchanged.
    Reduced leaves are kept exact to order 4 mu + 12 so that index
    computations see enough of the jet. Precision doubles until both hold.
    """
    if max_depth is None:
        max_depth = max_depth_default()
    L = L.at_origin()
    if not _is_singular(L):
        raise RegularPoint("the origin is not a singular point")
    mu0 = milnor_fulton(L)
    prec = 4 * mu0 + 16
    while True:
        try:
            nodes, components = _reduce(L, mu0, max_depth, prec)
            break
        except _LowPrecision:
            prec *= 2
    tree = ReductionTree(nodes, components, max_depth)
    if strict and any(n.kind == "unresolved" for n in nodes):
        raise DepthExceeded(f"depth cap {max_depth} reached with unresolved points")
    return tree


def _reduce(L: LocalFoliation, mu0: int, max_depth: int, prec: int):
    nodes: List[ReductionNode] = []
    components: Dict[str, DivisorComponent] = {}

    def make_node(F, parent, depth, trail, comps, milnor, precision):
        n = ReductionNode(len(nodes), parent, depth, trail, F, F.multiplicity(), milnor,
                          classify_linear(F), eigen_data(F), comps, precision=precision)
        nodes.append(n)
        return n

    def child(G, parent, trail, comps, bound):
        P = (prec if parent.precision is None else parent.precision) - parent.divisor_exponent
        G, cut = _truncated(G, P)
        if not cut and parent.precision is None:
            P = None
        elif P < bound + 2:
            raise _LowPrecision
        try:
            mu = milnor_fulton(G, bound)
        except NonIsolated:
            raise _LowPrecision
        return make_node(G, parent.id, parent.depth + 1, trail, comps, mu, P)

    stack = [make_node(L, None, 0, (), {}, mu0, None)]
    while stack:
        node = stack.pop()
        F = node.local
        if node.multiplicity == 1 and node.linear_class in REDUCED_LEAF:
            if node.precision is not None and node.precision < 4 * node.milnor + 12:
                raise _LowPrecision
            node.kind = REDUCED_LEAF[node.linear_class]
            if node.kind == "saddle_node":
                node.saddle_k = node.milnor - 1
                node.weak_in_divisor = _weak_in_divisor(F, node.components, components)
            continue
        if node.depth >= max_depth:
            node.kind = "unresolved"
            continue
        c1, c2 = blowup(F)
        for cid in node.components.values():
            components[cid].self_intersection -= 1
        eid = f"E{len(components) + 1}"
        components[eid] = DivisorComponent(eid, -1, c1.dicritical, node.id)
        node.dicritical = c1.dicritical
        node.divisor_exponent = c1.divisor_exponent
        kids = []
        # Milnor numbers on E add up to mu - nu^2 + nu + 1 (mu - nu^2 - nu + 1 if dicritical)
        nu = node.multiplicity
        bound = node.milnor - nu * nu + (-nu if node.dicritical else nu) + 1
        roots, missing = _points_on_exceptional(c1.form, "y")
        node.irrational_points = missing
        for v0 in roots:
            comps = {"y": eid}
            if v0 == 0 and "z" in node.components:
                comps["z"] = node.components["z"]
            kids.append(child(_shift_v(c1.form, v0), node, node.trail + (f"{CHART_U}@v={fmt_rat(v0)}",),
                              comps, bound))
        if _is_singular(c2.form):
            comps = {"z": eid}
            if "y" in node.components:
                comps["y"] = node.components["y"]
            kids.append(child(c2.form, node, node.trail + (f"{CHART_V}@0",), comps, bound))
        node.children = [k.id for k in kids]
        node.kind = "blown_up" if kids or not node.dicritical else "dicritical_contact"
        stack.extend(reversed(kids))
    return nodes, components


@dataclass(frozen=True)
class TypePredicates:
    is_generalized_curve: bool
    is_second_type: bool


def type_predicates(T: ReductionTree) -> TypePredicates:
    if T.unresolved:
        raise Unresolved("the reduction tree has unresolved or irrational points")
    sn = [n for n in T.final_points() if n.kind == "saddle_node"]
    gc = not sn
    st = not any(n.weak_in_divisor for n in sn)
    return TypePredicates(gc, st or gc)


def foliation_type_predicates(F, max_depth: int | None = None) -> TypePredicates:
    """Both predicates for a projective foliation: every singular point must satisfy them.

    Raises Unresolved when a singular point is not rational or a reduction is capped.
    """
    from .local import local_at, singular_points

    census = singular_points(F)
    if not census.complete:
        raise Unresolved(f"Milnor mass deficit {census.deficit}: some singular points are not rational")
    gc = st = True
    for pt in census.points:
        tp = type_predicates(reduce(local_at(F, pt.coordinates), max_depth))
        gc, st = gc and tp.is_generalized_curve, st and tp.is_second_type
    return TypePredicates(gc, st)


# ----------------------------------------------------------------------------
# checks


def milnor_blowup_check(L: LocalFoliation) -> bool:
    """van den Essen: ``mu = nu^2 - nu - 1 + sum of Milnor numbers on E``."""
    L = L.at_origin()
    nu, dic = tangent_cone_test(L)
    if dic:
        raise PreconditionFailed("the blow-up is dicritical")
    c1, c2 = blowup(L)
    roots, missing = _points_on_exceptional(c1.form, "y")
    if missing:
        raise PreconditionFailed(f"{missing} singular points on E are not rational")
    total = sum(milnor_fulton(c1.form.moved_to((0, v0))) for v0 in roots)
    if _is_singular(c2.form):
        total += milnor_fulton(c2.form)
    return milnor_fulton(L) == nu * nu - nu - 1 + total


def essen_holds_everywhere(T: ReductionTree) -> bool:
    """The blow-up relation at every non-dicritical blown-up node of the tree."""
    for n in T.nodes:
        if n.kind == "blown_up" and not n.dicritical:
            if n.irrational_points:
                raise PreconditionFailed("irrational points on an exceptional line")
            s = sum(T.nodes[c].milnor for c in n.children)
            nu = n.multiplicity
            if n.milnor != nu * nu - nu - 1 + s:
                return False
    return True


def cs_of_component_at(n: ReductionNode, cid: str, order: int | None = None) -> Rational:
    ax = next(a for a, c in n.components.items() if c == cid)
    if order is None:
        order = 2 * (n.milnor + max(n.local.a.total_degree(), n.local.b.total_degree())) + 4
    return cs_index_smooth(n.local, axis(ax, order))


def divisor_cs_sum(T: ReductionTree, component: str) -> Rational:
    """Sum of CS indices of an invariant component over its final singular points."""
    comp = T.components[component]
    if comp.dicritical:
        raise PreconditionFailed(f"{component} is dicritical")
    if T.unresolved:
        raise PreconditionFailed("the tree has unresolved or irrational points")
    total = Fraction(0)
    for n in T.final_points():
        if component in n.components.values():
            total += Fraction(cs_of_component_at(n, component))
    return rat(total)


def bb_via_tree(T: ReductionTree) -> Rational:
    """Baum-Bott index of the root: ``BB(p) = sum BB(children) + l^2``.

    ``l`` is the order of the pulled-back form along the new component
    (multiplicity, plus one when dicritical).
    """
    if T.unresolved:
        raise Unresolved("the tree has unresolved or irrational points")

    def bb(i):
        n = T.nodes[i]
        if n.kind in ("blown_up", "dicritical_contact"):
            return sum((Fraction(bb(c)) for c in n.children), Fraction(0)) + n.divisor_exponent ** 2
        return Fraction(bb_index_reduced(n.local))

    return rat(bb(0))


# ----------------------------------------------------------------------------
# indices at one point


def _eigenvector(J, lam) -> Tuple[Rational, Rational]:
    (p, q), (r, s) = J
    if q or p - lam:
        return rat(-q), rat(p - lam)
    return rat(lam - s), rat(r)


def point_indices(L: LocalFoliation, max_depth: int | None = None) -> List[IndexValue]:
    """BB index, plus CS and GSV of each smooth separatrix when the point is reduced.

    Separatrices are only reported when their tangent directions are rational.
    Non-reduced points get their BB index from the reduction tree.
    """
    L = L.at_origin()
    cls = classify_linear(L)
    out: List[IndexValue] = []
    seps = []
    if cls in ("hyperbolic_nonresonant", "hyperbolic_resonant"):
        ev = eigen_data(L).rational_eigenvalues()
        if ev is not None:
            J = linear_part(L)
            seps = [(f"eigenvalue {fmt_rat(lam)}", separatrix_along(L, _eigenvector(J, lam), 8)) for lam in ev]
    elif cls == "saddle_node":
        k = milnor_fulton(L) - 1
        seps = [("strong", strong_separatrix(L, 8)), ("weak", weak_separatrix(L, 2 * (k + 2) + 4))]
    for name, S in seps:
        out.append(IndexValue("CS", cs_index_smooth(L, S), name))
        out.append(IndexValue("GSV", gsv_index_smooth(L, S), name))
    if cls in REDUCED_LEAF:
        bb = bb_index_reduced(L)
    else:
        bb = bb_via_tree(reduce(L, max_depth, strict=True))
    out.append(IndexValue("BB", bb))
    return out
