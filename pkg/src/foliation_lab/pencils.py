"""Foliations with a rational first integral, and logarithmic 1-forms."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

from .algebra import MultiPoly, parse_poly, poly_gcd, rat
from .algebra.poly import Rational, exact_quotient
from .errors import DegeneratePencil, DegreeMismatch, NotHomogeneous, ResidueRelationViolated
from .foliation import XYZ, ProjFoliation, VectorFieldRep, from_vector_field


def _homog(f, what: str) -> MultiPoly:
    f = parse_poly(f, XYZ) if isinstance(f, str) else f.with_vars(XYZ)
    if not f or not f.is_homogeneous():
        raise NotHomogeneous(f"{what} must be a nonzero homogeneous polynomial")
    return f


@dataclass(frozen=True)
class Pencil:
    """The curves ``alpha G - beta H``; G and H homogeneous of one degree, coprime."""

    G: MultiPoly
    H: MultiPoly

    def __post_init__(self):
        G, H = _homog(self.G, "G"), _homog(self.H, "H")
        if G.total_degree() != H.total_degree():
            raise DegreeMismatch(f"deg G = {G.total_degree()} but deg H = {H.total_degree()}")
        if not poly_gcd(G, H).is_constant():
            raise DegeneratePencil("G and H share a factor")
        object.__setattr__(self, "G", G)
        object.__setattr__(self, "H", H)

    @property
    def s(self) -> int:
        return self.G.total_degree()

    def member(self, alpha, beta) -> MultiPoly:
        return self.G.scale(rat(alpha)) - self.H.scale(rat(beta))


def _gdh_minus_hdg(P: Pencil) -> Tuple[MultiPoly, MultiPoly, MultiPoly]:
    G, H = P.G, P.H
    return tuple(G * H.diff(v) - H * G.diff(v) for v in XYZ)


def foliation_from_pencil(P: Pencil) -> Tuple[ProjFoliation, MultiPoly]:
    """``G dH - H dG = R * Omega``; returns (Omega, R)."""
    W = _gdh_minus_hdg(P)
    if not any(W):
        raise DegeneratePencil("G dH - H dG vanishes identically")
    F = ProjFoliation.from_coeffs(*W)
    # from_coeffs divides out the gcd and rescales; recover R with W = R * Omega
    i = next(k for k, w in enumerate(W) if w)
    R = exact_quotient(W[i], F.coeffs[i])
    assert R is not None and all(w == R * c for w, c in zip(W, F.coeffs))
    return F, R


def degree_ledger(P: Pencil) -> dict:
    """``2s - 2 = deg R + d`` for the pencil foliation."""
    F, R = foliation_from_pencil(P)
    return {"s": P.s, "deg_R": R.total_degree(), "degree": F.degree,
            "holds": 2 * P.s - 2 == R.total_degree() + F.degree}


def verify_first_integral(F: ProjFoliation, P: Pencil) -> bool:
    """True iff ``G dH - H dG`` is a polynomial multiple of F's 1-form."""
    W = _gdh_minus_hdg(P)
    if not any(W):
        return False
    C = F.coeffs
    # W and C proportional as vectors; since C has no common factor the ratio is polynomial
    for i in range(3):
        for j in range(i + 1, 3):
            if W[i] * C[j] - W[j] * C[i]:
                return False
    return True


# ----------------------------------------------------------------------------
# logarithmic forms


@dataclass(frozen=True)
class LogData:
    factors: Tuple[MultiPoly, ...]
    residues: Tuple[Rational, ...]

    def __post_init__(self):
        fs = tuple(_homog(f, "factor") for f in self.factors)
        lams = tuple(rat(l) for l in self.residues)
        if len(fs) != len(lams) or len(fs) < 2:
            raise ValueError("need at least two factors, one residue each")
        if any(not l for l in lams):
            raise ValueError("residues must be nonzero")
        for i in range(len(fs)):
            for j in range(i + 1, len(fs)):
                if not poly_gcd(fs[i], fs[j]).is_constant():
                    raise ValueError(f"factors {i} and {j} are not coprime")
        object.__setattr__(self, "factors", fs)
        object.__setattr__(self, "residues", lams)

    @property
    def degrees(self) -> Tuple[int, ...]:
        return tuple(f.total_degree() for f in self.factors)


def logarithmic_form(L: LogData) -> ProjFoliation:
    """``prod f_j * sum lambda_i df_i / f_i`` as a polynomial 1-form."""
    total = sum((l * d for l, d in zip(L.residues, L.degrees)), Fraction(0))
    if total:
        raise ResidueRelationViolated(f"sum of lambda_i d_i is {total}, not 0")
    coeffs = [MultiPoly.zero(XYZ) for _ in XYZ]
    for i, (f, lam) in enumerate(zip(L.factors, L.residues)):
        rest = MultiPoly.const(lam, XYZ)
        for j, g in enumerate(L.factors):
            if j != i:
                rest = rest * g
        for k, v in enumerate(XYZ):
            coeffs[k] = coeffs[k] + rest * f.diff(v)
    return ProjFoliation.from_coeffs(*coeffs)


# ----------------------------------------------------------------------------
# pencils from the examples


def conic_pencil() -> Pencil:
    """Degree-1 foliation with a unique singular point, first integral of degree 2."""
    return Pencil(parse_poly("2*x*z + y^2", XYZ), parse_poly("z^2", XYZ))


def unique_point_pencil(n: int) -> Pencil:
    """``y(xy^(n-1) + z^n)`` against ``z(xy^(n-1) + z^n) + y^(n+1)``."""
    if n < 2:
        raise ValueError("n must be >= 2")
    x, y, z = MultiPoly.gens(XYZ)
    q = x * y ** (n - 1) + z ** n
    return Pencil(y * q, z * q + y ** (n + 1))


def shear_field(P: MultiPoly) -> VectorFieldRep:
    """``P(y,z) d/dx + z^d d/dy`` with P homogeneous of degree d."""
    P = P.with_vars(XYZ)
    d = P.total_degree()
    z = MultiPoly.var("z", XYZ)
    return VectorFieldRep(P, z ** d, MultiPoly.zero(XYZ))


def shear_pencil(P: MultiPoly) -> Pencil:
    """First integral of ``P d/dx + z^d d/dy``: sum a_i/(i+1) y^(i+1) z^(d-i) - x z^d against z^(d+1)."""
    P = P.with_vars(XYZ)
    if P.degree("x") > 0 or not P.is_homogeneous():
        raise ValueError("P must be a binary form in y, z")
    d = P.total_degree()
    x, y, z = MultiPoly.gens(XYZ)
    G = -(x * z ** d)
    for (_, i, _), a in P.terms.items():
        G = G + MultiPoly.monomial((0, i + 1, d - i), Fraction(a) / (i + 1), XYZ)
    return Pencil(G, z ** (d + 1))


def shear_foliation(P: MultiPoly) -> ProjFoliation:
    P = P.with_vars(XYZ)
    if not P.homogeneous_part(P.total_degree()).terms.get((0, P.total_degree(), 0)):
        raise ValueError("P(y, 0) must not vanish")
    return from_vector_field(shear_field(P))


def degree5_pencil(n: int, n1: int, n2: int, n3: int) -> Pencil:
    """``(xzy(z-y) + z^4 + y^4)^n`` against ``z^n1 y^n2 (z-y)^n3``."""
    x, y, z = MultiPoly.gens(XYZ)
    if n1 + n2 + n3 != 4 * n:
        raise ValueError("n1 + n2 + n3 must equal 4n")
    base = x * z * y * (z - y) + z ** 4 + y ** 4
    return Pencil(base ** n, z ** n1 * y ** n2 * (z - y) ** n3)
