"""Dense univariate polynomials over Q.

A polynomial is a list of coefficients, constant term first, with no
trailing zeros; the zero polynomial is ``[]``.  These helpers are the hot
path of root isolation and resultants, so they work on plain lists rather
than on :class:`~kpol.algebra.poly.MultiPoly`.
"""

from gmpy2 import mpq

from kpol.algebra.rat import rat

_ZERO = mpq(0)
_ONE = mpq(1)


def trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def from_coeffs(coeffs):
    return trim(rat(c) for c in coeffs)


def degree(p):
    """Degree, with ``-1`` for the zero polynomial."""
    return len(p) - 1


def lead(p):
    return p[-1] if p else _ZERO


def add(p, q):
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for i, c in enumerate(q):
        out[i] = out[i] + c
    return trim(out)


def sub(p, q):
    out = list(p) + [_ZERO] * max(0, len(q) - len(p))
    for i, c in enumerate(q):
        out[i] = out[i] - c
    return trim(out)


def neg(p):
    return [-c for c in p]


def scale(p, c):
    if c == 0:
        return []
    return [c * x for x in p]


def mul(p, q):
    if not p or not q:
        return []
    out = [_ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return trim(out)


def power(p, e):
    out = [_ONE]
    base = p
    while e:
        if e & 1:
            out = mul(out, base)
        e >>= 1
        if e:
            base = mul(base, base)
    return out


def evaluate(p, x):
    acc = _ZERO
    for c in reversed(p):
        acc = acc * x + c
    return acc


def derivative(p):
    return trim(i * p[i] for i in range(1, len(p)))


def divmod_(p, q):
    """Euclidean division over Q; returns ``(quotient, remainder)``."""
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(p)
    dq = len(q) - 1
    lq = q[-1]
    if len(r) - 1 < dq:
        return [], trim(r)
    quot = [_ZERO] * (len(r) - dq)
    for k in range(len(r) - 1 - dq, -1, -1):
        c = r[k + dq] / lq
        quot[k] = c
        if c:
            for j in range(dq + 1):
                r[k + j] -= c * q[j]
    return trim(quot), trim(r[:dq])


def rem(p, q):
    return divmod_(p, q)[1]


def exact_div(p, q):
    quot, r = divmod_(p, q)
    if r:
        raise ArithmeticError("inexact polynomial division")
    return quot


def monic(p):
    if not p:
        return []
    lc = p[-1]
    if lc == 1:
        return list(p)
    return [c / lc for c in p]


def gcd(p, q):
    """Monic gcd over Q (zero if both are zero)."""
    p, q = trim(p), trim(q)
    while q:
        p, q = q, rem(p, q)
    return monic(p)


def squarefree(p):
    """Square-free part ``p / gcd(p, p')`` (monic)."""
    if len(p) <= 2:
        return monic(p)
    g = gcd(p, derivative(p))
    if len(g) <= 1:
        return monic(p)
    return monic(exact_div(p, g))


def compose_linear(p, a, b):
    """``p(a*x + b)``."""
    out = []
    lin = [rat(b), rat(a)] if a else [rat(b)]
    for c in reversed(p):
        out = add(mul(out, lin), [c] if c else [])
    return out


def cauchy_bound(p):
    """``1 + max |c_i| / |lead|`` over the non-leading coefficients."""
    if not p:
        raise ValueError("zero polynomial has no root bound")
    lc = abs(p[-1])
    if len(p) == 1:
        return _ONE
    return 1 + max(abs(c) for c in p[:-1]) / lc


def is_constant(p):
    return len(p) <= 1


def interval_eval(p, lo, hi):
    """Enclosure of ``p`` over ``[lo, hi]`` by interval Horner."""
    a = b = _ZERO
    for c in reversed(p):
        cands = (a * lo, a * hi, b * lo, b * hi)
        a = min(cands) + c
        b = max(cands) + c
    return a, b


def to_str(p, var="x"):
    if not p:
        return "0"
    parts = []
    for i in range(len(p) - 1, -1, -1):
        c = p[i]
        if c == 0:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        parts.append(f"{c}*{mono}" if mono else f"{c}")
    return " + ".join(parts)
