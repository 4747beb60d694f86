"""Linear changes of coordinates, quadratic Cremona maps and pullbacks."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

from .algebra import MultiPoly, parse_poly
from .algebra.poly import exact_quotient
from .errors import Collapse, DegreeTooSmall, ParseError
from .foliation import XYZ, YZ, LocalFoliation, ProjFoliation

Point = Tuple[int, int, int]


@dataclass(frozen=True)
class CremonaMap:
    """A polynomial self-map of CP^2 given by three homogeneous components."""

    kind: str
    components: Tuple[MultiPoly, MultiPoly, MultiPoly]
    indeterminacy: Tuple[Point, ...] = ()
    exceptional: Tuple[MultiPoly, ...] = ()
    label: str = field(default="", compare=False)

    def __post_init__(self):
        comps = tuple(c.with_vars(XYZ) for c in self.components)
        degs = {c.total_degree() for c in comps}
        if len(degs) != 1 or not all(c.is_homogeneous() for c in comps):
            raise ValueError("components must be homogeneous of a common degree")
        object.__setattr__(self, "components", comps)

    @property
    def degree(self) -> int:
        return self.components[0].total_degree()

    def __call__(self, point):
        return tuple(c(*point) for c in self.components)

    def then(self, other: "CremonaMap") -> "CremonaMap":
        """The composite ``other o self`` (apply self first)."""
        sub = dict(zip(XYZ, self.components))
        comps = tuple(c.substitute(sub, XYZ) for c in other.components)
        return CremonaMap("custom", comps, label=f"{self.label};{other.label}")

    def jacobian_determinant(self) -> MultiPoly:
        J = [[c.diff(v) for v in XYZ] for c in self.components]
        return (J[0][0] * (J[1][1] * J[2][2] - J[1][2] * J[2][1])
                - J[0][1] * (J[1][0] * J[2][2] - J[1][2] * J[2][0])
                + J[0][2] * (J[1][0] * J[2][1] - J[1][1] * J[2][0]))


def linear_map(matrix: Sequence[Sequence]) -> CremonaMap:
    x = MultiPoly.gens(XYZ)
    comps = tuple(sum((x[j] * matrix[i][j] for j in range(3)), MultiPoly.zero(XYZ)) for i in range(3))
    m = matrix
    det = (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
           - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
           + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))
    if not det:
        raise ValueError("singular matrix")
    return CremonaMap("linear", comps, label="lin")


def substitution_map(rules: dict) -> CremonaMap:
    """Linear map from rules such as ``{"z": "z - x"}``; unlisted variables are fixed."""
    comps = []
    for v in XYZ:
        r = rules.get(v, v)
        comps.append(parse_poly(r, XYZ) if isinstance(r, str) else r)
    M = [[c.terms.get(e, 0) for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1))] for c in comps]
    if any(not c.is_homogeneous() or c.total_degree() != 1 for c in comps):
        raise ValueError("substitution rules must be linear forms")
    T = linear_map(M)
    text = ",".join(f"{k}->{v}" for k, v in rules.items())
    return CremonaMap("linear", T.components, label=f"lin:{text}")


def sigma() -> CremonaMap:
    x, y, z = MultiPoly.gens(XYZ)
    return CremonaMap("standard_sigma", (y * z, x * z, x * y),
                      indeterminacy=((1, 0, 0), (0, 1, 0), (0, 0, 1)),
                      exceptional=(x * y * z,), label="sigma")


def rho() -> CremonaMap:
    x, y, z = MultiPoly.gens(XYZ)
    return CremonaMap("rho", (x * y, y * y, x * x - y * z),
                      indeterminacy=((0, 0, 1),), exceptional=(y,), label="rho")


def rho2() -> CremonaMap:
    """``rho`` with the roles of x and y exchanged: collapses ``x = 0`` instead."""
    x, y, z = MultiPoly.gens(XYZ)
    return CremonaMap("rho", (x * x, x * y, y * y - x * z),
                      indeterminacy=((0, 0, 1),), exceptional=(x,), label="rho2")


def pullback(F: ProjFoliation, T: CremonaMap) -> ProjFoliation:
    """``T^* omega`` with the common factor (supported on Exc(T)) divided out."""
    sub = dict(zip(XYZ, T.components))
    composed = [c.substitute(sub, XYZ) for c in F.coeffs]
    new = []
    for v in XYZ:
        acc = MultiPoly.zero(XYZ)
        for Fi, Ti in zip(composed, T.components):
            d = Ti.diff(v)
            if d and Fi:
                acc = acc + Fi * d
        new.append(acc)
    if not any(new):
        raise Collapse(f"pullback by {T.label or T.kind} vanishes identically")
    return ProjFoliation.from_coeffs(*new)


_STEP = re.compile(r"^\s*lin\s*:\s*(.+)$")


def parse_pipeline(text: str) -> List[CremonaMap]:
    """Parse ``"lin:z->z-x; rho; lin:y->y-z; rho2"``.

    Steps: ``lin:<var>-><linear form>[,...]``, ``rho`` (alias ``rho1``), ``rho2``, ``sigma``.
    """
    maps = []
    for raw in text.split(";"):
        step = raw.strip()
        if not step:
            continue
        if step in ("rho", "rho1"):
            maps.append(rho())
        elif step == "rho2":
            maps.append(rho2())
        elif step == "sigma":
            maps.append(sigma())
        else:
            m = _STEP.match(step)
            if not m:
                raise ParseError(f"unknown pipeline step {step!r}")
            rules = {}
            for rule in m.group(1).split(","):
                if "->" not in rule:
                    raise ParseError(f"expected var->expr in {rule!r}")
                k, v = (s.strip() for s in rule.split("->", 1))
                if k not in XYZ:
                    raise ParseError(f"unknown variable {k!r}")
                rules[k] = v
            maps.append(substitution_map(rules))
    return maps


def run_pipeline(F: ProjFoliation, maps: Sequence[CremonaMap]) -> ProjFoliation:
    for T in maps:
        F = pullback(F, T)
    return F


OMEGA_TILDE_PIPELINE = "lin:z->z-x; rho; lin:y->y-z; rho2"


def euler_projectivization() -> ProjFoliation:
    return ProjFoliation.parse("-(y^2*z+x*y*(z-y))*dx + x^2*(z-y)*dy + x*y^2*dz")


def pipeline_section3(start: ProjFoliation | None = None) -> ProjFoliation:
    """Two rounds of (linear change, rho) that merge all singularities into one."""
    if start is None:
        start = euler_projectivization()
    return run_pipeline(start, parse_pipeline(OMEGA_TILDE_PIPELINE))


def homogenize_local(L: LocalFoliation, target_degree: int | None = None) -> ProjFoliation:
    """Projective foliation whose restriction to ``x = 1`` is ``L``.

    ``a dy + b dz`` becomes ``x^(d+1) (a dy + b dz)`` evaluated at (y/x, z/x)
    with the dx coefficient forced by Euler's relation.
    """
    L = L.at_origin() if L.base_point != (0, 0) else L
    a, b = L.a, L.b
    n = max(a.total_degree(), b.total_degree())
    y, z = MultiPoly.gens(YZ)
    top = y * a.homogeneous_part(n) + z * b.homogeneous_part(n)
    minimal = n - 1 if not top else n
    d = minimal if target_degree is None else target_degree
    if d < minimal:
        raise DegreeTooSmall(f"degree {d} is below the minimal degree {minimal}")
    X, Y, Z = MultiPoly.gens(XYZ)

    def hom(p: MultiPoly) -> MultiPoly:
        out = MultiPoly.zero(XYZ)
        for (i, j), c in p.terms.items():
            out = out + MultiPoly(XYZ, {(d + 1 - i - j, i, j): c})
        return out

    B, C = hom(a), hom(b)
    A = exact_quotient(-(Y * B + Z * C), X)
    if A is None:
        raise DegreeTooSmall("dx coefficient is not polynomial at this degree")
    return ProjFoliation.from_coeffs(A, B, C)
