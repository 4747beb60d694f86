from .gcd import content_in, poly_gcd, poly_gcd_many, rational_roots, resultant
from .parse import parse_field, parse_form, parse_poly
from .poly import MultiPoly, Rational, divide, divides, exact_quotient, fmt_rat, rat, to_text
from .series import StepResult, TruncSeries, compose_poly, series_solve_linear_step


def substitute(f, bindings, target_vars=None):
    """Simultaneous substitution ``f(var -> bindings[var])``."""
    return f.substitute(bindings, target_vars)


__all__ = [
    "MultiPoly", "Rational", "TruncSeries", "StepResult",
    "rat", "fmt_rat", "to_text", "divide", "divides", "exact_quotient",
    "poly_gcd", "poly_gcd_many", "content_in", "resultant", "rational_roots",
    "substitute", "series_solve_linear_step", "compose_poly",
    "parse_poly", "parse_form", "parse_field",
]
