"""Sylvester resultants and discriminants."""

from functools import lru_cache

from gmpy2 import mpq

from kpol.algebra import upoly
from kpol.algebra.poly import MultiPoly
from kpol.exceptions import BothZero


def _subset_det(rows, mul, add, sub, zero, is_zero):
    """Determinant by Laplace expansion memoised over column subsets.

    ``rows`` is a square matrix of ring elements; cost is ``O(n 2^n)`` ring
    multiplications, fine for the small Sylvester matrices used here.
    """
    n = len(rows)
    if n == 0:
        return None
    memo = {}

    def det(k, cols):
        if k == n:
            return None
        key = (k, cols)
        if key in memo:
            return memo[key]
        total = zero
        sgn_pos = True
        idx = 0
        for j in range(n):
            if not cols >> j & 1:
                continue
            entry = rows[k][j]
            if not is_zero(entry):
                minor = det(k + 1, cols & ~(1 << j))
                term = entry if minor is None else mul(entry, minor)
                total = add(total, term) if sgn_pos else sub(total, term)
            sgn_pos = not sgn_pos
            idx += 1
        memo[key] = total
        return total

    return det(0, (1 << n) - 1)


def sylvester_matrix(p, q, zero):
    """Sylvester matrix of coefficient lists ``p``, ``q`` (constant term first)."""
    m, n = len(p) - 1, len(q) - 1
    size = m + n
    rows = []
    for i in range(n):
        row = [zero] * size
        for j, c in enumerate(reversed(p)):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for j, c in enumerate(reversed(q)):
            row[i + j] = c
        rows.append(row)
    return rows


def _generic_resultant(p, q, zero, one, mul, add, sub, is_zero, power):
    m, n = len(p) - 1, len(q) - 1
    if m < 0 and n < 0:
        raise BothZero("resultant of two zero polynomials")
    if m < 0 or n < 0:
        return zero
    if m == 0 and n == 0:
        return one
    if m == 0:
        return power(p[0], n)
    if n == 0:
        return power(q[0], m)
    rows = sylvester_matrix(p, q, zero)
    return _subset_det(rows, mul, add, sub, zero, is_zero)


def resultant(P, Q, var):
    """Sylvester resultant of two :class:`MultiPoly` eliminating ``var``.

    The result keeps the arity; ``var`` no longer occurs in it.  A constant
    (in ``var``) argument ``c`` against a polynomial of degree ``d`` gives
    ``c**d``; two constants give ``1``.
    """
    if P.is_zero() and Q.is_zero():
        raise BothZero("resultant of two zero polynomials")
    arity = P.arity
    zero = MultiPoly.zero(arity)
    pc = P.coefficients_in(var) if not P.is_zero() else []
    qc = Q.coefficients_in(var) if not Q.is_zero() else []
    res = _generic_resultant(
        pc,
        qc,
        zero,
        MultiPoly.constant(arity, 1),
        lambda a, b: a * b,
        lambda a, b: a + b,
        lambda a, b: a - b,
        lambda a: a.is_zero(),
        lambda a, e: a**e,
    )
    return res


def discriminant_like(P, var):
    """``Res_var(P, dP/dvar)``: vanishes where ``P`` has a repeated root in ``var``."""
    return resultant(P, P.derivative(var), var)


def _upoly_pow(a, e):
    return upoly.power(a, e)


def _key(rows):
    return tuple(tuple(r) for r in rows)


@lru_cache(maxsize=100000)
def _bires_cached(fk, gk):
    f = [list(r) for r in fk]
    g = [list(r) for r in gk]
    return tuple(
        _generic_resultant(
            f, g, [], [mpq(1)], upoly.mul, upoly.add, upoly.sub, lambda a: not a, _upoly_pow
        )
    )


def _small_resultant(f, g):
    """Closed forms for degrees up to 2 in ``y``; None when not applicable."""
    m, n = len(f) - 1, len(g) - 1
    mul, sub, add = upoly.mul, upoly.sub, upoly.add
    if m == 1 and n == 1:
        return sub(mul(f[1], g[0]), mul(f[0], g[1]))
    if m == 1 and n == 2:
        a0, a1 = f
        b0, b1, b2 = g
        return add(sub(mul(b2, mul(a0, a0)), mul(b1, mul(a0, a1))), mul(b0, mul(a1, a1)))
    if m == 2 and n == 1:
        return _small_resultant(g, f)
    if m == 2 and n == 2:
        a0, a1, a2 = f
        b0, b1, b2 = g
        u = sub(mul(a2, b0), mul(a0, b2))
        v = sub(mul(a2, b1), mul(a1, b2))
        w = sub(mul(a1, b0), mul(a0, b1))
        return sub(mul(u, u), mul(v, w))
    return None


def bivariate_resultant_y(f, g):
    """``Res_y`` for bivariate polys given as lists over ``y`` of dense x-polys."""
    if f and g and f[-1] and g[-1]:
        r = _small_resultant(f, g)
        if r is not None:
            return upoly.trim(r)
    return list(_bires_cached(_key(f), _key(g)))


def univariate_resultant(p, q):
    """Resultant of two dense univariate polynomials (a rational)."""
    r = _generic_resultant(
        [[c] if c else [] for c in p],
        [[c] if c else [] for c in q],
        [],
        [mpq(1)],
        upoly.mul,
        upoly.add,
        upoly.sub,
        lambda a: not a,
        _upoly_pow,
    )
    return r[0] if r else mpq(0)
