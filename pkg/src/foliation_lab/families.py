"""Named families of foliations with their parameter side conditions.

``build_family(FamilySpec("S9", {"a2": 1}))`` fills unspecified parameters
from the family defaults, checks every side condition and returns the form.
Local families (S9, S11, ...) are germs at the origin of the chart ``x = 1``;
``projectivize`` turns them into foliations of CP^2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Callable, Dict, List, Mapping, Tuple

from .algebra import MultiPoly, parse_poly, rat
from .algebra.poly import Rational, divides
from .birational import homogenize_local
from .errors import InvalidParameters
from .foliation import XYZ, YZ, LocalFoliation, ProjFoliation, VectorFieldRep, from_vector_field
from .pencils import (conic_pencil, degree5_pencil, foliation_from_pencil, shear_foliation,
                      unique_point_pencil)


def _yz(text: str) -> MultiPoly:
    return parse_poly(text, YZ)


def _binary(coeffs) -> MultiPoly:
    """``c0 y^n + c1 y^(n-1) z + ... + cn z^n``."""
    n = len(coeffs) - 1
    return MultiPoly(YZ, {(n - i, i): rat(c) for i, c in enumerate(coeffs)})


def _cubic(p) -> MultiPoly:
    """``y^3 + a2 y^2 z + a1 y z^2 + a0 z^3``."""
    return _binary([1, p["a2"], p["a1"], p["a0"]])


@dataclass
class FamilySpec:
    family_id: str
    parameters: Dict[str, object] = field(default_factory=dict)

    def resolved(self) -> Dict[str, object]:
        fam = FAMILIES.get(self.family_id)
        if fam is None:
            raise InvalidParameters([f"unknown family {self.family_id!r}"])
        unknown = set(self.parameters) - set(fam.defaults)
        if unknown:
            raise InvalidParameters([f"unknown parameter {k!r}" for k in sorted(unknown)])
        out = dict(fam.defaults)
        for k, v in self.parameters.items():
            out[k] = v if isinstance(v, (MultiPoly, list, tuple)) or k in fam.poly_params else rat(v)
        for k in fam.poly_params:
            if isinstance(out[k], str):
                out[k] = _yz(out[k])
        return out

    @property
    def validity(self) -> List[str]:
        fam = FAMILIES.get(self.family_id)
        if fam is None:
            return [f"unknown family {self.family_id!r}"]
        try:
            p = self.resolved()
        except InvalidParameters as e:
            return e.violations
        return fam.check(p)


@dataclass(frozen=True)
class Family:
    family_id: str
    description: str
    defaults: Mapping[str, object]
    check: Callable[[dict], List[str]]
    build: Callable[[dict], object]
    poly_params: Tuple[str, ...] = ()


def build_family(spec: FamilySpec):
    """The literal form of the family with parameters substituted."""
    bad = spec.validity
    if bad:
        raise InvalidParameters(bad)
    return FAMILIES[spec.family_id].build(spec.resolved())


def projectivize(obj) -> ProjFoliation:
    """Projective foliation for a family member (identity on projective ones)."""
    if isinstance(obj, ProjFoliation):
        return obj
    return homogenize_local(obj)


# ----------------------------------------------------------------------------
# the nilpotent family and the degree-2 examples


def _nilpotent_check(p) -> List[str]:
    bad = []
    d = p["d"]
    if Fraction(d).denominator != 1 or d < 3 or int(d) % 2 == 0:
        bad.append("d must be an odd integer greater than 1")
    if not p["alpha"]:
        bad.append("alpha must be nonzero")
    if not p["beta"]:
        bad.append("beta must be nonzero")
    return bad


def nilpotent_field(d: int, alpha, beta) -> VectorFieldRep:
    x, y, z = MultiPoly.gens(XYZ)
    alpha, beta = rat(alpha), rat(beta)
    h = (d - 1) // 2
    P = y ** d * alpha
    Q = x ** h * y * z ** h * beta - z ** d * (beta * beta)
    R = x ** (d - 1) * y - x ** h * z ** (h + 1) * beta
    return VectorFieldRep(P, Q, R)


def _nilpotent_build(p) -> ProjFoliation:
    return from_vector_field(nilpotent_field(int(p["d"]), p["alpha"], p["beta"]))


def _normal_check(p) -> List[str]:
    bad = []
    d, m = p["d"], p["m"]
    if Fraction(d).denominator != 1 or d < 2:
        bad.append("d must be an integer >= 2")
    elif Fraction(m).denominator != 1 or not 1 < m <= d:
        bad.append("m must be an integer with 1 < m <= d")
    if not p["a"]:
        bad.append("a_m != 0")
    if not p["u"]:
        bad.append("U(0) != 0")
    return bad


def _normal_build(p) -> LocalFoliation:
    """Field ``u z^N d/dy + (y + a z^m) d/dz``, N = d^2 + d + 1, as ``a dy + b dz``."""
    d, m = int(p["d"]), int(p["m"])
    y, z = MultiPoly.gens(YZ)
    return LocalFoliation(-(y + z ** m * p["a"]), z ** (d * d + d + 1) * p["u"])


def _none(p) -> List[str]:
    return []


# ----------------------------------------------------------------------------
# strata of degree 3


def _s9_check(p) -> List[str]:
    bad = []
    if not p["b"]:
        bad.append("b != 0")
    if not p["a"]:
        bad.append("a != 0 (the case a = 0 is the second S9 family)")
    return bad


def _s9_build(p) -> LocalFoliation:
    y, z = MultiPoly.gens(YZ)
    K = z * z * p["a"] + _cubic(p)
    return LocalFoliation(z * K, z ** 3 * p["b"] - y * K)


def _s9b_check(p) -> List[str]:
    bad = []
    if not p["c"]:
        bad.append("c != 0")
    y, z = MultiPoly.gens(YZ)
    line = y * p["c"] + z * p["b"]
    # b z^3 + c y z^2 = z^2 (c y + b z); z^2 never divides P since P(y,0) = y^3
    if divides(line, _cubic(p)):
        bad.append("b z^3 + c y z^2 must share no factor with P")
    return bad


def _s9b_build(p) -> LocalFoliation:
    y, z = MultiPoly.gens(YZ)
    P = _cubic(p)
    return LocalFoliation(z * P, z ** 3 * p["b"] + y * z * z * p["c"] - y * P)


def _s11_check(p) -> List[str]:
    bad = []
    if not p["c"]:
        bad.append("c != 0")
    if not (p["a1"] * p["q2"]):
        bad.append("P3(y, 0) != 0, i.e. a1 * q2 != 0")
    return bad


def s11_p3(p) -> MultiPoly:
    y, z = MultiPoly.gens(YZ)
    Q2 = _binary([p["q2"], p["q1"], p["q0"]])
    return Q2 * (y * p["a1"] + z * p["a0"]) + z ** 3 * p["c"]


def _s11_build(p, printed: bool = False) -> LocalFoliation:
    """``zK dy + (z^2 + z Q2 - yK)dz`` with ``K = a1 yz + a0 z^2 + P3``.

    ``printed`` gives ``z^2 + Q2`` in place of ``z^2 + z Q2``; that variant has
    the extra singular points ``Q2(y,0) = y P3(y,0)`` on ``z = 0``.
    """
    y, z = MultiPoly.gens(YZ)
    Q2 = _binary([p["q2"], p["q1"], p["q0"]])
    K = y * z * p["a1"] + z * z * p["a0"] + s11_p3(p)
    return LocalFoliation(z * K, z * z + (Q2 if printed else z * Q2) - y * K)


def _s12_P3(p) -> MultiPoly:
    return _binary([1, p["p2"], p["p1"], p["p0"]])


def _s12_check(p) -> List[str]:
    bad = []
    if p["alpha1"] * p["alpha2"] * (p["alpha"] * p["alpha1"] - 1):
        bad.append("alpha1 * alpha2 * (alpha * alpha1 - 1) = 0")
    if not (p["beta1"] * p["beta2"]):
        bad.append("beta1 * beta2 != 0")
    P3 = _s12_P3(p)
    if not (P3(p["beta1"], p["alpha1"]) * P3(p["beta2"], p["alpha2"])):
        bad.append("P3(beta1, alpha1) * P3(beta2, alpha2) != 0")
    return bad


def _s12_build(p, printed: bool = False) -> LocalFoliation:
    """``zK dy + (alpha l1^2 l2 - yK)dz`` with ``K = l1 l2 + P3``, ``li = alpha_i y - beta_i z``.

    ``printed`` multiplies the ``alpha l1^2 l2`` term by ``y``, which raises the
    degree to 4.
    """
    y, z = MultiPoly.gens(YZ)
    l1 = y * p["alpha1"] - z * p["beta1"]
    l2 = y * p["alpha2"] - z * p["beta2"]
    K = l1 * l2 + _s12_P3(p)
    extra = l1 * l1 * l2 * p["alpha"]
    return LocalFoliation(z * K, (extra * y if printed else extra) - y * K)


def _s15_check(p) -> List[str]:
    return [] if p["b"] else ["b != 0"]


def _s15_build(p) -> LocalFoliation:
    y, z = MultiPoly.gens(YZ)
    K = z + y * z * p["a1"] + z * z * p["a0"] + _binary([1, p["p2"], p["p1"], p["p0"]])
    return LocalFoliation(z * K, z ** 3 * p["b"] - y * K)


# ----------------------------------------------------------------------------
# saddle-node family homogenized at infinity


def _homog_check(p) -> List[str]:
    bad = []
    d = p["d"]
    if Fraction(d).denominator != 1 or d < 2:
        bad.append("d must be an integer >= 2")
    if p["eps"] not in (0, 1):
        bad.append("eps must be 0 or 1")
    Q = p["Q"]
    if Q and (not Q.is_homogeneous() or Q.total_degree() != d):
        bad.append("Q must be homogeneous of degree d")
    return bad


def _homog_build(p) -> LocalFoliation:
    y, z = MultiPoly.gens(YZ)
    return LocalFoliation(p["Q"] + z + y * p["eps"], y ** int(p["d"]))


def homogenized_saddle_node(p: Mapping) -> ProjFoliation:
    """``x(Q + x^(d-1)(z + eps y))dy + x y^d dz - (yQ + x^(d-1) y (z + eps y) + y^d z)dx``."""
    d = int(p["d"])
    x, y, z = MultiPoly.gens(XYZ)
    Q = p["Q"].with_vars(XYZ)
    lin = z + y * p["eps"]
    A = -(y * Q + x ** (d - 1) * y * lin + y ** d * z)
    B = x * (Q + x ** (d - 1) * lin)
    C = x * y ** d
    return ProjFoliation.from_coeffs(A, B, C)


def homogenized_n0(p: Mapping) -> int:
    """Multiplicity of the root ``y = 0`` of ``y Q(y,z) + y^d z``."""
    y, z = MultiPoly.gens(YZ)
    f = y * p["Q"] + y ** int(p["d"]) * z
    return f.min_degree("y")


# ----------------------------------------------------------------------------
# pencil families


def _shear_check(p) -> List[str]:
    P = p["P"]
    d = P.total_degree() if P else 0
    bad = []
    if not P or not P.is_homogeneous() or d < 1:
        bad.append("P must be a nonzero binary form")
    elif not P.terms.get((d, 0)):
        bad.append("P(y, 0) != 0")
    return bad


def _unique_point_check(p) -> List[str]:
    n = p["n"]
    return [] if Fraction(n).denominator == 1 and n >= 2 else ["n must be an integer >= 2"]


def _deg5_check(p) -> List[str]:
    n, ns = p["n"], [p["n1"], p["n2"], p["n3"]]
    if any(Fraction(v).denominator != 1 or v < 1 for v in [n] + ns):
        return ["n, n1, n2, n3 must be positive integers"]
    bad = []
    if sum(ns) != 4 * n:
        bad.append("n1 + n2 + n3 = 4n")
    for i, v in enumerate(ns, 1):
        if gcd(int(v), int(n)) != 1:
            bad.append(f"n{i} relatively prime to n")
    return bad


def degree5_display(n, n1, n2, n3) -> LocalFoliation:
    """The local form printed alongside the degree-5 pencil, transcribed term by term."""
    y, z = MultiPoly.gens(YZ)
    n, n1, n2, n3 = (rat(v) for v in (n, n1, n2, n3))
    dz = (z ** 5 * y * (-n2) + z ** 4 * y ** 2 * (n2 + n3) + z * y ** 5 * (n1 + n3) - y ** 6 * n1
          + z ** 3 * y ** 2 * (2 * n - n1 - n3) + z ** 2 * y ** 3 * (-3 * n + 2 * n1 + n3)
          + z * y ** 4 * (n - n1))
    dy = (z ** 6 * n2 + z ** 5 * y * (-n2 - n3) + z ** 2 * y ** 4 * (-n1 - n3) + z * y ** 5 * n1
          + z ** 4 * y * (n - n2) + z ** 3 * y ** 2 * (-3 * n + 2 * n2 + n3)
          + z ** 2 * y ** 3 * (2 * n - n2 - n3))
    return LocalFoliation(dy, dz)


# ----------------------------------------------------------------------------
# local displays of the degree-2 examples


OMEGA2 = "z^2*dz + (z + y^2)*(y*dz - z*dy)"
OMEGA3 = "y*z*dz + (y^2 + z^2)*(z*dy - y*dz)"
OMEGA2_TWO_BLOWUPS = "(-y^2 + (2*z - 1)*y)*dz + z^2*dy"
X2_FIELD = "-y^2*Dx + (z*y - z^2)*Dy + z^2*Dz"
X3_FIELD = "(y^2 + z^2)*Dx + y*z*Dy"

# degree 7 foliation with a single singular point, as displayed
OMEGA_TILDE = (
    "(-x^7*y - x^7*z + 4*x^6*y^2 + 4*x^6*y*z + 2*x^6*z^2 - 5*x^5*y^3 - 4*x^5*y^2*z + x^5*y*z^2 + x^4*y^4"
    " - 4*x^4*y^3*z - 3*x^4*y^2*z^2 - 3*x^4*y*z^3 - x^4*z^4 + 4*x^3*y^5 + 9*x^3*y^4*z + 12*x^3*y^3*z^2"
    " + 5*x^3*y^2*z^3 - 6*x^2*y^6 - 15*x^2*y^5*z - 9*x^2*y^4*z^2 + 6*x*y^7 + 7*x*y^6*z - 2*y^8)*dx"
    " + (x^8 - 4*x^7*y - 2*x^7*z + 5*x^6*y^2 + 3*x^6*y*z - x^5*y^3 + 2*x^5*y^2*z - 4*x^4*y^4 - 6*x^4*y^3*z"
    " - 6*x^4*y^2*z^2 - 2*x^4*y*z^3 + 6*x^3*y^5 + 12*x^3*y^4*z + 6*x^3*y^3*z^2 - 6*x^2*y^6 - 6*x^2*y^5*z"
    " + 2*x*y^7)*dy"
    " + (x^8 - 2*x^7*y - 2*x^7*z + x^6*y^2 - x^6*y*z + 2*x^5*y^3 + 3*x^5*y^2*z + 3*x^5*y*z^2 + x^5*z^3"
    " - 3*x^4*y^4 - 6*x^4*y^3*z - 3*x^4*y^2*z^2 + 3*x^3*y^5 + 3*x^3*y^4*z - x^2*y^6)*dz")

# the degree-1 pencil foliation as displayed (its y has the opposite sign)
CONIC_DISPLAY = "z^2*dx - y*z*dy + (y^2 - x*z)*dz"


def _field(text):
    return lambda p: from_vector_field(VectorFieldRep.parse(text))


def _local(text):
    return lambda p: LocalFoliation.parse(text)


FAMILIES: Dict[str, Family] = {f.family_id: f for f in [
    Family("nilpotent", "nilpotent unique singularity, odd d", {"d": 3, "alpha": 1, "beta": 1},
           _nilpotent_check, _nilpotent_build),
    Family("nilpotent_normal", "u z^N d/dy + (y + a z^m) d/dz, N = d^2+d+1",
           {"d": 3, "m": 2, "a": 1, "u": 1}, _normal_check, _normal_build),
    Family("X2", "degree-2 field with a unique singular point", {}, _none, _field(X2_FIELD)),
    Family("X3", "degree-2 field with a unique singular point", {}, _none, _field(X3_FIELD)),
    Family("omega2", "local form of X2", {}, _none, _local(OMEGA2)),
    Family("omega3", "local form of X3", {}, _none, _local(OMEGA3)),
    Family("S9", "z(az^2+P)dy + (bz^3 - y(az^2+P))dz",
           {"a": 1, "b": 1, "a2": 0, "a1": 0, "a0": 0}, _s9_check, _s9_build),
    Family("S9b", "zP dy + (bz^3 + cyz^2 - yP)dz",
           {"b": 1, "c": 1, "a2": 0, "a1": 0, "a0": 2}, _s9b_check, _s9b_build),
    Family("S11", "z(a1 yz + a0 z^2 + P3)dy + (z^2 + Q2 - y(...))dz",
           {"a1": 1, "a0": 0, "q2": 1, "q1": 0, "q0": 0, "c": 1}, _s11_check, _s11_build),
    Family("S12", "z(l1 l2 + P3)dy + (alpha l1^2 l2 y - y(l1 l2 + P3))dz",
           {"alpha": 1, "alpha1": 1, "alpha2": 1, "beta1": 1, "beta2": 2, "p2": 0, "p1": 0, "p0": 0},
           _s12_check, _s12_build),
    Family("S11_printed", "S11 with z^2 + Q2 as displayed",
           {"a1": 1, "a0": 0, "q2": 1, "q1": 0, "q0": 0, "c": 1}, _s11_check,
           lambda p: _s11_build(p, printed=True)),
    Family("S12_printed", "S12 with the extra factor y as displayed",
           {"alpha": 1, "alpha1": 1, "alpha2": 1, "beta1": 1, "beta2": 2, "p2": 0, "p1": 0, "p0": 0},
           _s12_check, lambda p: _s12_build(p, printed=True)),
    Family("S15", "z(z + a1 yz + a0 z^2 + P)dy + (bz^3 - y(...))dz",
           {"b": 1, "a1": 0, "a0": 0, "p2": 0, "p1": 0, "p0": 0}, _s15_check, _s15_build),
    Family("homogenized", "y^d dz + (Q + z + eps y)dy", {"d": 2, "eps": 0, "Q": _yz("y^2")},
           _homog_check, _homog_build, ("Q",)),
    Family("shear", "P d/dx + z^d d/dy", {"P": _yz("y^2 + z^2")}, _shear_check,
           lambda p: shear_foliation(p["P"]), ("P",)),
    Family("unique_point", "pencil y(xy^(n-1)+z^n), z(xy^(n-1)+z^n)+y^(n+1)", {"n": 2}, _unique_point_check,
           lambda p: foliation_from_pencil(unique_point_pencil(int(p["n"])))[0]),
    Family("degree5", "pencil (xzy(z-y)+z^4+y^4)^n, z^n1 y^n2 (z-y)^n3",
           {"n": 3, "n1": 4, "n2": 4, "n3": 4}, _deg5_check,
           lambda p: foliation_from_pencil(degree5_pencil(*(int(p[k]) for k in ("n", "n1", "n2", "n3"))))[0]),
    Family("conic", "pencil 2xz + y^2, z^2", {}, _none, lambda p: foliation_from_pencil(conic_pencil())[0]),
]}


# ----------------------------------------------------------------------------
# S9: the corner chart, the weak separatrix and the cusp


def _s9_unit(params) -> Dict[str, object]:
    return FamilySpec("S9", dict(params, a=1, b=1)).resolved()


def s9_corner_chart(params) -> LocalFoliation:
    """The S9 form (a = b = 1) pulled back by ``y = u v^2, z = u v^3``.

    The result is written in the local names (y, z) standing for (u, v).
    """
    p = _s9_unit(params)
    L = _s9_build(p)
    u, v = MultiPoly.gens(YZ)
    sub = {"y": u * v * v, "z": u * v ** 3}
    A, B = L.a.substitute(sub, YZ), L.b.substitute(sub, YZ)
    # dy = v^2 du + 2uv dv, dz = v^3 du + 3uv^2 dv
    return LocalFoliation(A * v * v + B * v ** 3, A * u * v * 2 + B * u * v * v * 3)


def s9_chart_display(params) -> LocalFoliation:
    """``v^2 du - u(Q(v)u + 1 - 3v)dv`` with ``Q = 1 + a2 v + a1 v^2 + a0 v^3``."""
    p = _s9_unit(params)
    u, v = MultiPoly.gens(YZ)
    Q = MultiPoly.const(1, YZ) + v * p["a2"] + v * v * p["a1"] + v ** 3 * p["a0"]
    return LocalFoliation(v * v, -(u * (Q * u + 1 - v * 3)))


def s9_weak_separatrix(params, max_terms: int = 64) -> MultiPoly:
    """Polynomial ``w(v)`` with ``u = 1/w(v)`` the weak separatrix through ``u = -1, v = 0``.

    Substituting ``u = 1/w`` in the corner chart gives the linear equation
    ``v^2 w' + (1 - 3v) w + Q(v) = 0``; its coefficients satisfy
    ``w_k = -Q_k - (k - 4) w_(k-1)`` and are computed until they stop.
    """
    p = _s9_unit(params)
    Q = [Fraction(1), p["a2"], p["a1"], p["a0"]]
    w: List[Rational] = []
    for k in range(max_terms):
        qk = Q[k] if k < len(Q) else 0
        wk = -qk - ((k - 4) * w[-1] if w else 0)
        if k >= len(Q) and wk == 0:
            break
        w.append(rat(wk))
    else:
        raise ValueError("the weak separatrix is not polynomial within max_terms")
    return MultiPoly(("v",), {(k,): c for k, c in enumerate(w) if c})


def s9_separatrix_residual(params, w: MultiPoly) -> MultiPoly:
    """``v^2 w' + (1 - 3v) w + Q``; zero exactly when ``u = 1/w`` is invariant."""
    p = _s9_unit(params)
    w = w.with_vars(("v",))
    v = MultiPoly.var("v", ("v",))
    Q = MultiPoly.const(1, ("v",)) + v * p["a2"] + v * v * p["a1"] + v ** 3 * p["a0"]
    return v * v * w.diff("v") + (1 - v * 3) * w + Q


def s9_cusp(params, constant: int = 6) -> MultiPoly:
    """``z^2 + y^3 + (a2+3)y^2z + (2a2+a1+6)yz^2 + (2a2+a1+a0+c)z^3`` with ``c = constant``, homogenized."""
    p = _s9_unit(params)
    x, y, z = MultiPoly.gens(XYZ)
    a2, a1, a0 = p["a2"], p["a1"], p["a0"]
    return (x * z * z + y ** 3 + y * y * z * (a2 + 3) + y * z * z * (2 * a2 + a1 + 6)
            + z ** 3 * (2 * a2 + a1 + a0 + constant))


def s9_cusp_check(params, curve: MultiPoly | None = None) -> bool:
    """True iff the cusp (or the given curve) is invariant for the homogenized S9 form, a = b = 1."""
    from .foliation import is_invariant

    F = projectivize(_s9_build(_s9_unit(params)))
    return is_invariant(F, s9_cusp(params) if curve is None else curve)
