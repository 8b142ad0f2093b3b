"""Exact arithmetic and real-algebraic primitives."""

from kpol.algebra import upoly
from kpol.algebra.interval import RatInterval, interval_eval, may_vanish
from kpol.algebra.poly import MultiPoly, format_poly, parse_poly
from kpol.algebra.rat import Rat, format_rat, parse_rat, rat
from kpol.algebra.resultant import bivariate_resultant_y, discriminant_like, resultant
from kpol.algebra.roots import (
    EQ,
    GT,
    LT,
    NEG_INF,
    POS_INF,
    AlgebraicNumber,
    compare,
    roots_below,
)
from kpol.algebra import roots as _roots
from kpol.exceptions import ZeroPolynomial


def _as_dense(p):
    if isinstance(p, MultiPoly):
        return p.to_univariate()
    return upoly.from_coeffs(p)


def poly_eval(F, point):
    """Exact value of ``F`` at ``point``."""
    return F.evaluate([rat(v) for v in point])


def substitute(F, assignment):
    """Fix a block of variables; the arity is preserved."""
    return F.substitute(assignment)


def isolate_real_roots(p):
    """Distinct real roots of a univariate polynomial, ascending."""
    return _roots.isolate_real_roots(_as_dense(p))


def sturm_count(p, interval=None):
    """Distinct real roots in ``(lo, hi]`` (the whole line when ``interval`` is None)."""
    dense = _as_dense(p)
    if interval is None:
        return _roots.sturm_count(dense)
    if isinstance(interval, RatInterval):
        lo, hi = interval.lo, interval.hi
    else:
        lo, hi = interval
    return _roots.sturm_count(dense, lo, hi)


def root_bound(p):
    return _roots.root_bound(_as_dense(p))


__all__ = [
    "AlgebraicNumber",
    "EQ",
    "GT",
    "LT",
    "MultiPoly",
    "NEG_INF",
    "POS_INF",
    "Rat",
    "RatInterval",
    "ZeroPolynomial",
    "bivariate_resultant_y",
    "compare",
    "discriminant_like",
    "format_poly",
    "format_rat",
    "interval_eval",
    "isolate_real_roots",
    "may_vanish",
    "parse_poly",
    "parse_rat",
    "poly_eval",
    "rat",
    "resultant",
    "root_bound",
    "roots_below",
    "sturm_count",
    "substitute",
    "upoly",
]
