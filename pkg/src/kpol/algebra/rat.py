"""Exact rationals.

Rationals are ``gmpy2.mpq`` values, which are always stored reduced with a
positive denominator.  Plain ``int`` values are accepted everywhere a
rational is expected.
"""

import re
from fractions import Fraction

from gmpy2 import mpq, mpz

from kpol.exceptions import ParseError

Rat = type(mpq(0))

_RAT_RE = re.compile(r"^(-?\d+)/(\d+)$")


def rat(value):
    """Convert ``value`` to an exact rational.

    Floats are rejected: they would silently introduce rounding.
    """
    if isinstance(value, Rat):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, type(mpz(0)))):
        return mpq(value)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        return parse_rat(value)
    if isinstance(value, float):
        raise TypeError("floats are not accepted as exact rationals")
    num = getattr(value, "numerator", None)
    den = getattr(value, "denominator", None)
    if num is not None and den is not None:
        return mpq(int(num), int(den))
    raise TypeError(f"cannot convert {value!r} to a rational")


def format_rat(value):
    """Canonical ``"p/q"`` text form (``q >= 1``, reduced)."""
    value = rat(value)
    return f"{value.numerator}/{value.denominator}"


def parse_rat(text, strict=True):
    """Parse a canonical ``"p/q"`` token.

    With ``strict`` (the default) the token must be reduced with ``q >= 1``;
    ``"2/4"`` and ``"1/0"`` raise :class:`ParseError`.  Bare integers are
    accepted only when ``strict`` is false.
    """
    text = text.strip()
    m = _RAT_RE.match(text)
    if m is None:
        if not strict and re.match(r"^-?\d+$", text):
            return mpq(int(text))
        raise ParseError(f"malformed rational token {text!r}")
    p, q = int(m.group(1)), int(m.group(2))
    if q == 0:
        raise ParseError(f"zero denominator in {text!r}")
    value = mpq(p, q)
    if value.numerator != p or value.denominator != q:
        raise ParseError(f"non-canonical rational token {text!r}")
    return value


def sign(value):
    return (value > 0) - (value < 0)


def midpoint(a, b):
    return (rat(a) + rat(b)) / 2


def is_integral(value):
    return rat(value).denominator == 1
