"""Command-line front end.

    foliation-lab singularities --form "form: ..."
    foliation-lab reduce --form "z*dy - 3*y*dz + y^2*dy"
    foliation-lab family S9 --a2 0 --a1 0 --a0 0 --report reduce,indices
    foliation-lab corpus

Exit status: 0 on success, 2 on a domain error (reported as
``{"error": <name>, "detail": ...}``), 1 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from . import __version__
from .algebra import MultiPoly, parse_poly
from .algebra.poly import fmt_rat
from .birational import euler_projectivization, parse_pipeline, run_pipeline
from .errors import FoliationError
from .families import FAMILIES, FamilySpec, build_family, projectivize
from .foliation import LocalFoliation, ProjFoliation, VectorFieldRep, from_vector_field
from .local import colength, line_index_sums, local_at, milnor_fulton, singular_points
from .pencils import Pencil, degree_ledger, foliation_from_pencil
from .reduction import max_depth_default, point_indices, reduce, type_predicates
from .separatrix import gevrey_fit, solve_separatrix, solve_w_ode, w_residual

SCHEMA = "foliation-lab/1"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ----------------------------------------------------------------------------
# input handling


def parse_foliation(text: str):
    """Projective for ``field:``/``form:`` text or a ``dx`` term, otherwise a local ``a*dy + b*dz``."""
    t = text.strip()
    if t.lower().startswith("field:") or "Dx" in t or "Dy" in t or "Dz" in t:
        return from_vector_field(VectorFieldRep.parse(t))
    if t.lower().startswith("form:") or "dx" in t:
        return ProjFoliation.parse(t)
    return LocalFoliation.parse(t)


def _forms(args) -> List[str]:
    if args.form and args.input:
        raise UsageError("give either --form or --input, not both")
    if args.form:
        return [args.form]
    if args.input:
        try:
            with open(args.input) as fh:
                lines = [ln.strip() for ln in fh]
        except OSError as e:
            raise UsageError(f"cannot read {args.input}: {e}")
        forms = [ln for ln in lines if ln and not ln.startswith("#")]
        if not forms:
            raise UsageError(f"{args.input} contains no forms")
        return forms
    raise UsageError("a form is required (--form or --input)")


def _point(text: str) -> Tuple[Fraction, ...]:
    try:
        return tuple(Fraction(c.strip()) for c in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad point {text!r}; expected comma-separated rationals")


def _local(obj, at: str | None) -> LocalFoliation:
    if isinstance(obj, LocalFoliation):
        if at is None:
            return obj.at_origin()
        pt = _point(at)
        if len(pt) != 2:
            raise UsageError("a local form takes --at y,z")
        return obj.moved_to(pt).at_origin()
    if at is None:
        raise UsageError("a projective foliation needs --at x,y,z")
    pt = _point(at)
    if len(pt) != 3:
        raise UsageError("a projective foliation takes --at x,y,z")
    return local_at(obj, pt)


def _echo(obj) -> str:
    return str(obj)


def _r(c) -> str:
    return fmt_rat(c)


def _max_depth(args) -> int:
    return args.max_depth if getattr(args, "max_depth", None) is not None else max_depth_default()


# ----------------------------------------------------------------------------
# shared result builders


def census_json(F: ProjFoliation) -> Tuple[dict, List[str]]:
    C = singular_points(F)
    warnings = []
    if not C.complete:
        warnings.append(f"incomplete census: Milnor mass {C.milnor_mass_found} of {C.milnor_mass_expected}"
                        " found at rational points")
    pts = [{"point": [_r(c) for c in p.coordinates], "chart": p.chart, "multiplicity": p.multiplicity,
            "milnor": p.milnor, "class": p.linear_class,
            "trace": _r(p.eigen_data.trace), "det": _r(p.eigen_data.det)} for p in C.points]
    return {"degree": F.degree, "points": pts, "milnor_mass": C.milnor_mass_found,
            "expected_mass": C.milnor_mass_expected, "complete": C.complete}, warnings


def indices_json(L: LocalFoliation, max_depth: int) -> List[dict]:
    return [{"kind": iv.kind, "value": _r(iv.value), "separatrix": iv.separatrix}
            for iv in point_indices(L, max_depth)]


def reduce_json(L: LocalFoliation, max_depth: int) -> Tuple[dict, str, List[str]]:
    T = reduce(L, max_depth)
    d = T.to_json()
    d["blowups"] = T.blowups()
    warnings = []
    if T.unresolved:
        warnings.append("reduction incomplete: depth cap reached or irrational points on a divisor")
    else:
        tp = type_predicates(T)
        d["generalized_curve"] = tp.is_generalized_curve
        d["second_type"] = tp.is_second_type
    summary = f"blowups: {d['blowups']}"
    if "second_type" in d:
        summary += f"  generalized_curve: {_scalar(d['generalized_curve'])}  second_type: {_scalar(d['second_type'])}"
    return d, T.ascii() + "\n" + summary, warnings


# ----------------------------------------------------------------------------
# commands; each returns (inputs, results, warnings, text)


def cmd_singularities(args):
    out, warnings = [], []
    for text in _forms(args):
        F = parse_foliation(text)
        if not isinstance(F, ProjFoliation):
            raise UsageError("singularities needs a projective foliation (form: ... or field: ...)")
        res, w = census_json(F)
        if args.indices:
            for p, pt in zip(singular_points(F).points, res["points"]):
                pt["indices"] = indices_json(p.local, _max_depth(args))
        out.append((_echo(F), res))
        warnings += w
    return _collect(out, warnings)


def cmd_milnor(args):
    out = []
    for text in _forms(args):
        obj = parse_foliation(text)
        L = _local(obj, args.at)
        res = {"milnor": milnor_fulton(L), "multiplicity": L.multiplicity()}
        if args.check:
            res["colength"] = colength([L.a, L.b])
        out.append((_echo(obj), res))
    return _collect(out, [])


def cmd_indices(args):
    out, warnings = [], []
    for text in _forms(args):
        obj = parse_foliation(text)
        res: Dict[str, object] = {}
        if isinstance(obj, ProjFoliation) and args.at is None:
            pts = []
            for p in singular_points(obj).points:
                pts.append({"point": [_r(c) for c in p.coordinates], "indices": indices_json(p.local,
                                                                                          _max_depth(args))})
            res["points"] = pts
        else:
            res["indices"] = indices_json(_local(obj, args.at), _max_depth(args))
        if args.line:
            if not isinstance(obj, ProjFoliation):
                raise UsageError("--line needs a projective foliation")
            cs, gsv = line_index_sums(obj, parse_poly(args.line))
            res["line"] = {"line": str(parse_poly(args.line)), "cs_sum": _r(cs), "gsv_sum": gsv}
        out.append((_echo(obj), res))
    return _collect(out, warnings)


def cmd_reduce(args):
    out, warnings, texts = [], [], []
    for text in _forms(args):
        obj = parse_foliation(text)
        at = args.at
        if isinstance(obj, ProjFoliation) and at is None:
            pts = singular_points(obj).points
            if len(pts) != 1:
                raise UsageError("the foliation has several singular points; choose one with --at")
            at = ",".join(_r(c) for c in pts[0].coordinates)
        res, ascii_tree, w = reduce_json(_local(obj, at), _max_depth(args))
        out.append((_echo(obj), res))
        warnings += w
        texts.append(ascii_tree)
    inputs, results, warnings, _ = _collect(out, warnings)
    return inputs, results, warnings, "\n\n".join(texts)


def cmd_cremona(args):
    maps = parse_pipeline(args.pipeline)
    if not maps:
        raise UsageError("empty pipeline")
    out = []
    forms = _forms(args) if (args.form or args.input) else [str(euler_projectivization())]
    for text in forms:
        F = parse_foliation(text)
        if not isinstance(F, ProjFoliation):
            raise UsageError("cremona needs a projective foliation")
        G = run_pipeline(F, maps)
        out.append((_echo(F), {"pipeline": args.pipeline, "foliation": str(G), "degree": G.degree}))
    return _collect(out, [])


def _jet(text: str | None) -> List[Fraction]:
    if text is None:
        return [Fraction(0)]
    t = text.strip()
    if "z" in t or "y" in t:
        f = parse_poly(t, ("z",))
        n = f.total_degree()
        return [Fraction(f.terms.get((k,), 0)) for k in range(max(n, 0) + 1)]
    return list(_point(t))


def cmd_separatrix(args):
    out = []
    for text in _forms(args):
        obj = parse_foliation(text)
        L = _local(obj, args.at)
        S = solve_separatrix(L, _jet(args.jet), args.order, args.solved_for)
        var = "z" if args.solved_for == "y" else "y"
        res = {"solved_for": args.solved_for, "variable": var, "order": S.order,
               "coefficients": [_r(c) for c in S.coefficients()], "free_parameters": list(S.free_parameters)}
        out.append((_echo(obj), res))
    return _collect(out, [])


def cmd_gevrey(args):
    warnings = []
    if args.w_ode:
        d, alpha, beta, n = args.w_ode
        try:
            d_i, n_i = int(d), int(n)
            alpha_q, beta_q = Fraction(alpha), Fraction(beta)
        except (ValueError, ZeroDivisionError):
            raise UsageError("--w-ode takes d alpha beta N (integers and rationals)")
        W = solve_w_ode(d_i, alpha_q, beta_q, n_i)
        coeffs = list(W.coeffs)
        inputs = {"w_ode": {"d": d_i, "alpha": _r(alpha_q), "beta": _r(beta_q), "N": n_i}}
        extra = {"residual_zero": w_residual(d_i, alpha_q, beta_q, W).is_zero()}
    elif args.coefficients:
        try:
            with open(args.coefficients) as fh:
                raw = json.load(fh)
            coeffs = [Fraction(str(c)) for c in raw]
        except (OSError, ValueError, TypeError) as e:
            raise UsageError(f"cannot read coefficients from {args.coefficients}: {e}")
        inputs = {"coefficients": args.coefficients}
        extra = {}
    else:
        raise UsageError("gevrey needs --w-ode d alpha beta N or --coefficients FILE")
    fit = gevrey_fit(coeffs)
    res = {"coefficients": [_r(c) for c in coeffs],
           "fit": {"s_hat": f"{fit.s_hat:.4f}", "log_growth": f"{fit.log_growth:.4f}",
                   "r_squared": f"{fit.r_squared:.4f}", "n_range": list(fit.n_range), "float": True}}
    res.update(extra)
    return inputs, res, warnings, None


def cmd_pencil(args):
    P = Pencil(parse_poly(args.G), parse_poly(args.H))
    F, R = foliation_from_pencil(P)
    census, warnings = census_json(F)
    res = {"foliation": str(F), "R": str(R), "degree_ledger": degree_ledger(P), "census": census}
    return {"G": str(P.G), "H": str(P.H)}, res, warnings, None


def _family_params(extra: Sequence[str]) -> Dict[str, str]:
    params, i = {}, 0
    while i < len(extra):
        key = extra[i]
        if not key.startswith("--") or i + 1 >= len(extra):
            raise UsageError(f"family parameters come as --name value pairs, got {key!r}")
        params[key[2:].replace("-", "_")] = extra[i + 1]
        i += 2
    return params


def cmd_family(args, extra):
    if args.family_id not in FAMILIES:
        raise UsageError(f"unknown family {args.family_id!r}; choose from {', '.join(FAMILIES)}")
    fam = FAMILIES[args.family_id]
    raw = _family_params(extra)
    params = {}
    for k, v in raw.items():
        if k in fam.poly_params:
            params[k] = v
        else:
            try:
                params[k] = Fraction(v)
            except (ValueError, ZeroDivisionError):
                raise UsageError(f"parameter {k} must be rational, got {v!r}")
    spec = FamilySpec(args.family_id, params)
    obj = build_family(spec)
    reports = [r.strip() for r in (args.report or "").split(",") if r.strip()]
    known = {"census", "reduce", "indices", "separatrix"}
    bad = [r for r in reports if r not in known]
    if bad:
        raise UsageError(f"unknown report(s) {bad}; choose from {sorted(known)}")
    resolved = {k: (str(v) if isinstance(v, MultiPoly) else _r(v)) for k, v in spec.resolved().items()}
    res: Dict[str, object] = {"family": args.family_id, "parameters": resolved,
                              "kind": "local" if isinstance(obj, LocalFoliation) else "projective",
                              "form": str(obj)}
    warnings: List[str] = []
    text = None
    md = _max_depth(args)
    if isinstance(obj, LocalFoliation):
        locals_ = [("origin", obj)]
    else:
        locals_ = [(",".join(_r(c) for c in p.coordinates), p.local) for p in singular_points(obj).points]
    if "census" in reports:
        res["census"], w = census_json(projectivize(obj))
        warnings += w
    if "reduce" in reports:
        trees, texts = {}, []
        for name, L in locals_:
            d, t, w = reduce_json(L, md)
            trees[name] = d
            texts.append(f"{name}:\n{t}")
            warnings += w
        res["reduce"] = trees
        text = "\n".join(texts)
    if "indices" in reports:
        res["indices"] = {name: indices_json(L, md) for name, L in locals_}
    if "separatrix" in reports:
        if not args.family_id == "S9":
            raise UsageError("the separatrix report is available for S9")
        from .families import s9_cusp_check, s9_separatrix_residual, s9_weak_separatrix

        p = {k: spec.resolved()[k] for k in ("a2", "a1", "a0")}
        w = s9_weak_separatrix(p)
        res["separatrix"] = {"w": str(w), "residual_zero": not s9_separatrix_residual(p, w),
                             "cusp_invariant": s9_cusp_check(p)}
    if text is not None:
        text = "\n".join(_text({k: v for k, v in res.items() if k != "reduce"}) + ["reduction:", text])
    return {"family": args.family_id, "parameters": raw}, res, warnings, text


def cmd_corpus(args):
    from .corpus import CRITERIA, run_corpus

    only = None
    if args.only:
        try:
            only = {int(x) for x in args.only.split(",")}
        except ValueError:
            raise UsageError("--only takes comma-separated criterion numbers")
        unknown = only - {c.number for c in CRITERIA}
        if unknown:
            raise UsageError(f"unknown criteria {sorted(unknown)}")
    rows = run_corpus(only)
    lines = [f"{'#':>3}  {'status':6}  title"]
    for r in rows:
        lines.append(f"{r['criterion']:>3}  {'PASS' if r['passed'] else 'FAIL':6}  {r['title']}")
    passed = sum(1 for r in rows if r["passed"])
    lines.append(f"{passed}/{len(rows)} passed")
    return {"only": sorted(only) if only else None}, {"criteria": rows, "passed": passed, "total": len(rows)}, \
        [], "\n".join(lines)


def _collect(out, warnings):
    if len(out) == 1:
        return {"form": out[0][0]}, out[0][1], warnings, None
    return {"forms": [o[0] for o in out]}, [o[1] for o in out], warnings, None


# ----------------------------------------------------------------------------
# output


def _text(obj, indent=0) -> List[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines += _text(v, indent + 1)
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and not _flat(v):
                lines.append(f"{pad}-")
                lines += _text(v, indent + 1)
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(f"{pad}{_scalar(obj)}")
    return lines


def _flat(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _scalar(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "-"
    return str(v)


def _csv(results) -> str:
    rows = results if isinstance(results, list) else [results]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "coefficient"])
    for r in rows:
        for n, c in enumerate(r["coefficients"]):
            w.writerow([n, c])
    return buf.getvalue().rstrip("\n")


def build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "text", "csv"), default="text")
    common.add_argument("--no-timing", action="store_true", help="omit the timing field")

    def with_form(sp, at=True):
        sp.add_argument("--form", help="form: A*dx + B*dy + C*dz, field: P*Dx + ..., or a local a*dy + b*dz")
        sp.add_argument("--input", help="file with one form per line")
        if at:
            sp.add_argument("--at", help="point: x,y,z (projective) or y,z (local)")

    p = _Parser(prog="foliation-lab", description="Exact computations with foliations of CP^2.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("singularities", parents=[common], help="singular points and Milnor numbers")
    with_form(sp, at=False)
    sp.add_argument("--indices", action="store_true", help="also report indices at each point")
    sp.add_argument("--max-depth", type=int)

    sp = sub.add_parser("milnor", parents=[common], help="Milnor number at a point")
    with_form(sp)
    sp.add_argument("--check", action="store_true", help="also compute the colength independently")

    sp = sub.add_parser("indices", parents=[common], help="CS, GSV and BB indices")
    with_form(sp)
    sp.add_argument("--line", help="invariant line: report the CS and GSV sums along it")
    sp.add_argument("--max-depth", type=int)

    sp = sub.add_parser("reduce", parents=[common], help="reduction of singularities by blow-ups")
    with_form(sp)
    sp.add_argument("--max-depth", type=int)

    sp = sub.add_parser("cremona", parents=[common], help="pull back along a pipeline of maps")
    with_form(sp, at=False)
    sp.add_argument("--pipeline", required=True, help='e.g. "lin:z->z-x; rho; lin:y->y-z; rho2"')

    sp = sub.add_parser("separatrix", parents=[common], help="formal separatrix y = h(z)")
    with_form(sp)
    sp.add_argument("--order", type=int, default=10)
    sp.add_argument("--jet", help="initial jet: coefficients h0,h1,... or a polynomial in z")
    sp.add_argument("--solved-for", choices=("y", "z"), default="y")

    sp = sub.add_parser("gevrey", parents=[common], help="Gevrey order diagnostic")
    sp.add_argument("--w-ode", nargs=4, metavar=("D", "ALPHA", "BETA", "N"))
    sp.add_argument("--coefficients", help="JSON list of coefficients")

    sp = sub.add_parser("pencil", parents=[common], help="foliation of the pencil alpha G - beta H")
    sp.add_argument("--G", required=True)
    sp.add_argument("--H", required=True)

    sp = sub.add_parser("family", parents=[common], help="a named family; parameters as --name value")
    sp.add_argument("family_id")
    sp.add_argument("--report", help="comma-separated: census, reduce, indices, separatrix")
    sp.add_argument("--max-depth", type=int)

    sp = sub.add_parser("corpus", parents=[common], help="run the worked-example regression suite")
    sp.add_argument("--only", help="comma-separated criterion numbers")
    return p


COMMANDS = {"singularities": cmd_singularities, "milnor": cmd_milnor, "indices": cmd_indices,
            "reduce": cmd_reduce, "cremona": cmd_cremona, "separatrix": cmd_separatrix,
            "gevrey": cmd_gevrey, "pencil": cmd_pencil, "corpus": cmd_corpus}


def run(argv: Sequence[str] | None = None) -> Tuple[int, dict]:
    """Execute one command; returns the exit status and the report."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    t0 = time.perf_counter()
    command = None
    try:
        args, extra = parser.parse_known_args(argv)
        command = args.command
        if extra and args.command != "family":
            raise UsageError(f"unrecognized arguments: {' '.join(extra)}")
        if args.format == "csv" and args.command not in ("separatrix", "gevrey"):
            raise UsageError("--format csv is only available for separatrix and gevrey")
        if getattr(args, "max_depth", None) is not None and args.max_depth < 0:
            raise UsageError("--max-depth must be non-negative")
        if args.command == "family":
            inputs, results, warnings, text = cmd_family(args, extra)
        else:
            inputs, results, warnings, text = COMMANDS[args.command](args)
    except UsageError as e:
        return 1, {"schema": SCHEMA, "usage_error": str(e)}
    except FoliationError as e:
        return 2, {"schema": SCHEMA, "command": command, "error": e.name, "detail": str(e)}
    report = {"schema": SCHEMA, "command": args.command, "inputs": inputs, "results": results,
              "warnings": warnings,
              "timing": None if args.no_timing else {"seconds": round(time.perf_counter() - t0, 3)}}
    report["_format"] = args.format
    report["_text"] = text
    return 0, report


def render(report: dict) -> str:
    fmt = report.pop("_format", "json")
    text = report.pop("_text", None)
    if "usage_error" in report or "error" in report or fmt == "json":
        return json.dumps(report, indent=2)
    if fmt == "csv":
        return _csv(report["results"])
    head = [f"{report['command']}"]
    inputs = report.get("inputs") or {}
    head += _text(inputs, 1)
    body = text if text is not None else "\n".join(_text(report["results"]))
    tail = [f"warning: {w}" for w in report.get("warnings", [])]
    if report.get("timing"):
        tail.append(f"time: {report['timing']['seconds']}s")
    return "\n".join(head + [body] + tail)


def main(argv: Sequence[str] | None = None) -> int:
    code, report = run(argv)
    if code == 1:
        sys.stderr.write(f"foliation-lab: error: {report['usage_error']}\n")
        sys.stderr.write("try 'foliation-lab --help'\n")
        return 1
    out = render(report)
    sys.stdout.write(out + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
