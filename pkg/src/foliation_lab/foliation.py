"""Projective and local foliations on CP^2.

A projective foliation of degree d is stored as the 1-form ``A dx + B dy + C dz``
with A, B, C homogeneous of degree d+1, satisfying ``xA + yB + zC = 0`` and
without common factor.  Construction normalises the triple (gcd removed, jointly
primitive integer coefficients, first coefficient in canonical order positive)
so that "equal up to a nonzero scalar" is plain equality.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Tuple

from .algebra import MultiPoly, parse_field, parse_form, poly_gcd, poly_gcd_many, rat
from .algebra.parse import field_text, form_text
from .algebra.poly import Rational, exact_quotient
from .errors import DegenerateField, DegreeMismatch, EulerViolation, InvariantLine, NotHomogeneous

XYZ = ("x", "y", "z")
YZ = ("y", "z")
CHARTS = ("x", "y", "z")


def _joint_normalize(polys: Sequence[MultiPoly]) -> Tuple[MultiPoly, ...]:
    """Scale a tuple jointly to coprime integers, first nonzero coefficient positive."""
    from math import gcd, lcm

    num = 0
    den = 1
    first = None
    for p in polys:
        for e, c in p.sorted_terms():
            if first is None:
                first = c
            if isinstance(c, Fraction):
                num = gcd(num, c.numerator)
                den = lcm(den, c.denominator)
            else:
                num = gcd(num, c)
    if first is None:
        return tuple(polys)
    s = Fraction(den, num)
    if first < 0:
        s = -s
    return tuple(p.scale(s) for p in polys)


def _proportional(p: Sequence[MultiPoly], q: Sequence[MultiPoly]) -> bool:
    ratio = None
    for a, b in zip(p, q):
        if bool(a) != bool(b):
            return False
        if a.terms.keys() != b.terms.keys():
            return False
        for e, c in a.terms.items():
            r = Fraction(c) / Fraction(b.terms[e])
            if ratio is None:
                ratio = r
            elif r != ratio:
                return False
    return True


@dataclass(frozen=True)
class ProjFoliation:
    A: MultiPoly
    B: MultiPoly
    C: MultiPoly
    degree: int

    @classmethod
    def from_coeffs(cls, A: MultiPoly, B: MultiPoly, C: MultiPoly) -> "ProjFoliation":
        A, B, C = (p.with_vars(XYZ) for p in (A, B, C))
        if not (A or B or C):
            raise DegenerateField("all three coefficients vanish")
        g = poly_gcd_many([A, B, C])
        if not g.is_constant():
            A, B, C = (exact_quotient(p, g) for p in (A, B, C))
        degs = {p.total_degree() for p in (A, B, C) if p}
        if len(degs) != 1 or not all(p.is_homogeneous() for p in (A, B, C)):
            raise NotHomogeneous(f"coefficients are not homogeneous of one degree: {sorted(degs)}")
        x, y, z = MultiPoly.gens(XYZ)
        if x * A + y * B + z * C:
            raise EulerViolation("xA + yB + zC does not vanish")
        A, B, C = _joint_normalize((A, B, C))
        return cls(A, B, C, degs.pop() - 1)

    @classmethod
    def parse(cls, text: str) -> "ProjFoliation":
        return cls.from_coeffs(*parse_form(text, XYZ))

    @property
    def coeffs(self) -> Tuple[MultiPoly, MultiPoly, MultiPoly]:
        return (self.A, self.B, self.C)

    def __str__(self):
        return form_text(self.coeffs, XYZ)

    def same_as(self, other: "ProjFoliation") -> bool:
        return _proportional(self.coeffs, other.coeffs)


@dataclass(frozen=True)
class VectorFieldRep:
    P: MultiPoly
    Q: MultiPoly
    R: MultiPoly

    def __post_init__(self):
        comps = [p.with_vars(XYZ) for p in (self.P, self.Q, self.R)]
        object.__setattr__(self, "P", comps[0])
        object.__setattr__(self, "Q", comps[1])
        object.__setattr__(self, "R", comps[2])
        degs = {p.total_degree() for p in comps if p}
        if len(degs) > 1 or not all(p.is_homogeneous() for p in comps):
            raise NotHomogeneous("vector field components must be homogeneous of one degree")

    @classmethod
    def parse(cls, text: str) -> "VectorFieldRep":
        return cls(*parse_field(text, XYZ))

    @property
    def degree(self) -> int:
        return max(p.total_degree() for p in (self.P, self.Q, self.R))

    def __str__(self):
        return field_text((self.P, self.Q, self.R), XYZ)


@dataclass(frozen=True)
class LocalFoliation:
    """Germ ``a dy + b dz`` in an affine chart; ``a``, ``b`` live in ``(y, z)``.

    ``coords`` names the projective coordinates the local ``(y, z)`` stand for,
    e.g. ``("x", "y")`` for the chart ``z = 1``.
    """

    a: MultiPoly
    b: MultiPoly
    chart: str = "x"
    base_point: Tuple[Rational, Rational] = (0, 0)
    coords: Tuple[str, str] = YZ
    lineage: Tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        a, b = self.a.with_vars(YZ), self.b.with_vars(YZ)
        if not a and not b:
            raise DegenerateField("local form vanishes identically")
        g = poly_gcd(a, b)
        if not g.is_constant():
            a, b = exact_quotient(a, g), exact_quotient(b, g)
        a, b = _joint_normalize((a, b))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "base_point", tuple(rat(c) for c in self.base_point))

    @classmethod
    def coprime(cls, a: MultiPoly, b: MultiPoly, chart: str = "x", coords: Tuple[str, str] = YZ,
                lineage: Tuple[str, ...] = ()) -> "LocalFoliation":
        """Build at the origin without the gcd step; the caller vouches that a, b are coprime."""
        a, b = a.with_vars(YZ), b.with_vars(YZ)
        if not a and not b:
            raise DegenerateField("local form vanishes identically")
        obj = cls.__new__(cls)
        a, b = _joint_normalize((a, b))
        for k, v in (("a", a), ("b", b), ("chart", chart), ("base_point", (rat(0), rat(0))),
                     ("coords", coords), ("lineage", lineage)):
            object.__setattr__(obj, k, v)
        return obj

    @classmethod
    def parse(cls, text: str, **kw) -> "LocalFoliation":
        a, b = parse_form(text, YZ)
        return cls(a, b, **kw)

    def __str__(self):
        return form_text((self.a, self.b), YZ)

    def at_origin(self) -> "LocalFoliation":
        """Translate so that the base point becomes the origin."""
        y0, z0 = self.base_point
        if not y0 and not z0:
            return self
        y, z = MultiPoly.gens(YZ)
        sub = {"y": y + y0, "z": z + z0}
        return LocalFoliation(self.a.substitute(sub), self.b.substitute(sub), self.chart,
                              (0, 0), self.coords, self.lineage)

    def moved_to(self, point) -> "LocalFoliation":
        return LocalFoliation(self.a, self.b, self.chart, tuple(point), self.coords, self.lineage)

    def swapped(self) -> "LocalFoliation":
        """Exchange the roles of y and z."""
        sw = {"y": "z", "z": "y"}
        a = self.a.rename(sw).with_vars(YZ)
        b = self.b.rename(sw).with_vars(YZ)
        return LocalFoliation(b, a, self.chart, (self.base_point[1], self.base_point[0]),
                              (self.coords[1], self.coords[0]), self.lineage)

    def multiplicity(self) -> int:
        """min(ord a, ord b) at the origin (after translating the base point)."""
        L = self.at_origin()
        orders = [p.order() for p in (L.a, L.b) if p]
        return min(orders)

    def vector_field(self) -> Tuple[MultiPoly, MultiPoly]:
        """A vector field ``b d/dy - a d/dz`` spanning the kernel of the form."""
        return (self.b, -self.a)

    def same_as(self, other: "LocalFoliation") -> bool:
        return _proportional((self.a, self.b), (other.a, other.b))


def from_vector_field(v: VectorFieldRep) -> ProjFoliation:
    """1-form ``det(d; position; field)`` with common factors cleared."""
    x, y, z = MultiPoly.gens(XYZ)
    P, Q, R = v.P, v.Q, v.R
    A = y * R - z * Q
    B = z * P - x * R
    C = x * Q - y * P
    if not (A or B or C):
        raise DegenerateField("the field is a multiple of the radial field")
    return ProjFoliation.from_coeffs(A, B, C)


def radial_field() -> VectorFieldRep:
    return VectorFieldRep(*MultiPoly.gens(XYZ))


def radial_equivalent(v: VectorFieldRep, G: MultiPoly) -> VectorFieldRep:
    """``v + G * (x, y, z)``; G must be homogeneous of degree deg(v) - 1."""
    G = G.with_vars(XYZ)
    if G:
        if not G.is_homogeneous() or G.total_degree() != v.degree - 1:
            raise DegreeMismatch(f"G must be homogeneous of degree {v.degree - 1}")
    x, y, z = MultiPoly.gens(XYZ)
    return VectorFieldRep(v.P + G * x, v.Q + G * y, v.R + G * z)


def restrict_to_chart(F: ProjFoliation, chart: str = "x") -> LocalFoliation:
    """Dehomogenise at ``chart = 1``; the remaining coordinates become (y, z)."""
    if chart not in CHARTS:
        raise ValueError(f"chart must be one of {CHARTS}")
    i = CHARTS.index(chart)
    rest = [v for v in XYZ if v != chart]
    coeffs = F.coeffs
    local = {rest[0]: "y", rest[1]: "z"}
    pieces = []
    for v in rest:
        c = coeffs[XYZ.index(v)].substitute({chart: 1}, XYZ)
        # rename the two surviving coordinates to (y, z) simultaneously
        terms = {}
        for e, k in c.terms.items():
            terms[(e[XYZ.index(rest[0])], e[XYZ.index(rest[1])])] = k
        pieces.append(MultiPoly(YZ, terms))
    return LocalFoliation(pieces[0], pieces[1], chart=chart, coords=(rest[0], rest[1]))


def wedge_df(F: ProjFoliation, f: MultiPoly) -> Tuple[MultiPoly, MultiPoly, MultiPoly]:
    """Coefficients of ``omega ^ df`` on dx^dy, dx^dz, dy^dz."""
    f = f.with_vars(XYZ)
    fx, fy, fz = f.diff("x"), f.diff("y"), f.diff("z")
    A, B, C = F.coeffs
    return (A * fy - B * fx, A * fz - C * fx, B * fz - C * fy)


def is_invariant(F: ProjFoliation, f: MultiPoly) -> bool:
    """True iff f divides every coefficient of ``omega ^ df``."""
    f = f.with_vars(XYZ)
    if not f:
        raise ValueError("the zero polynomial defines no curve")
    return all(exact_quotient(c, f) is not None for c in wedge_df(F, f))


def tangency_polynomial(F: ProjFoliation, line: MultiPoly) -> MultiPoly:
    """Binary form in (s, t) whose roots are the tangencies of F with the line."""
    line = line.with_vars(XYZ)
    if line.total_degree() != 1 or not line.is_homogeneous():
        raise ValueError("expected a linear form")
    l = [line.terms.get(e, 0) for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]
    # two independent points on the line
    basis = []
    for cand in ((l[1], -l[0], 0), (l[2], 0, -l[0]), (0, l[2], -l[1])):
        if any(cand):
            if not basis or _independent(basis[0], cand):
                basis.append(cand)
        if len(basis) == 2:
            break
    p, q = basis
    ST = ("s", "t")
    s, t = MultiPoly.gens(ST)
    images = [s * p[i] + t * q[i] for i in range(3)]
    sub = dict(zip(XYZ, images))
    A, B, C = (c.substitute(sub, ST) for c in F.coeffs)
    E = A * p[0] + B * p[1] + C * p[2]      # coefficient of ds
    G = A * q[0] + B * q[1] + C * q[2]      # coefficient of dt; sE + tG = 0
    K = exact_quotient(E, t)
    assert K is not None, "Euler relation forces t | E"
    return K


def _independent(p, q) -> bool:
    return any(p[i] * q[j] - p[j] * q[i] for i in range(3) for j in range(i + 1, 3))


def degree_via_tangency(F: ProjFoliation, line: MultiPoly) -> int:
    K = tangency_polynomial(F, line)
    if not K:
        raise InvariantLine(f"{line} is invariant")
    return K.total_degree()


def is_invariant_local(L: LocalFoliation, f: MultiPoly) -> bool:
    """True iff the curve ``f = 0`` is invariant for ``a dy + b dz``: f divides ``a f_z - b f_y``."""
    f = f.with_vars(YZ)
    if not f:
        raise ValueError("the zero polynomial defines no curve")
    return exact_quotient(L.a * f.diff("z") - L.b * f.diff("y"), f) is not None
