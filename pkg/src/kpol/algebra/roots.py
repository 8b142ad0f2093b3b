"""Sturm sequences, real root isolation and real algebraic numbers.

Isolating intervals are half-open ``(lo, hi]`` with rational endpoints.  The
Sturm count of a square-free polynomial over ``(a, b]`` is ``V(a) - V(b)``,
which stays valid when an endpoint is itself a root, so no perturbation is
ever needed.
"""

from functools import lru_cache, total_ordering
from math import isqrt

from gmpy2 import mpq

from kpol.algebra import upoly
from kpol.algebra.rat import Rat, rat, sign
from kpol.exceptions import ZeroPolynomial

LT, EQ, GT = -1, 0, 1

NEG_INF = "-inf"
POS_INF = "+inf"


def _key(p):
    return tuple(p)


@lru_cache(maxsize=65536)
def _sturm_cached(key):
    p = list(key)
    seq = [p, upoly.derivative(p)]
    while seq[-1]:
        r = upoly.rem(seq[-2], seq[-1])
        if not r:
            break
        seq.append(upoly.neg(r))
    if not seq[-1]:
        seq.pop()
    return tuple(tuple(s) for s in seq)


def sturm_sequence(p):
    """Sturm chain of a square-free polynomial (as lists)."""
    if not p:
        raise ZeroPolynomial("Sturm sequence of the zero polynomial")
    return [list(s) for s in _sturm_cached(_key(p))]


def _variations(signs):
    count = 0
    prev = 0
    for s in signs:
        if s == 0:
            continue
        if prev and s != prev:
            count += 1
        prev = s
    return count


def _signs_at(seq, x):
    if x == NEG_INF:
        return [sign(s[-1]) * (1 if (len(s) - 1) % 2 == 0 else -1) for s in seq]
    if x == POS_INF:
        return [sign(s[-1]) for s in seq]
    return [sign(upoly.evaluate(s, x)) for s in seq]


def sturm_count(p, lo=NEG_INF, hi=POS_INF):
    """Number of distinct real roots of ``p`` in ``(lo, hi]``.

    ``p`` is made square-free first.  ``lo``/``hi`` may be the infinity
    markers :data:`NEG_INF` / :data:`POS_INF`.
    """
    p = upoly.trim(p)
    if not p:
        raise ZeroPolynomial("sturm_count of the zero polynomial")
    sf = upoly.squarefree(p)
    if len(sf) == 1:
        return 0
    seq = _sturm_cached(_key(sf))
    if lo not in (NEG_INF, POS_INF):
        lo = rat(lo)
    if hi not in (NEG_INF, POS_INF):
        hi = rat(hi)
    return _variations(_signs_at(seq, lo)) - _variations(_signs_at(seq, hi))


def root_bound(p):
    """Cauchy bound ``B``: every real root lies in ``(-B, B)``."""
    p = upoly.trim(p)
    if not p:
        raise ZeroPolynomial("root_bound of the zero polynomial")
    return upoly.cauchy_bound(p)


@total_ordering
class AlgebraicNumber:
    """A real root of a square-free polynomial, isolated in ``(lo, hi]``.

    ``value`` holds the exact rational when the root is known to be rational.
    Instances are refined in place; refinement never changes the number.
    """

    __slots__ = ("poly", "lo", "hi", "value", "_quad")

    def __init__(self, poly, lo, hi, value=None):
        self.poly = poly
        self.lo = lo
        self.hi = hi
        self.value = value
        self._quad = None
        if value is None and len(poly) == 2:
            self.value = -poly[0] / poly[1]
        if self.value is not None:
            self.lo = self.value - 1 if self.lo is None else self.lo
            self.hi = self.value

    @classmethod
    def from_rational(cls, r):
        r = rat(r)
        return cls([-r, mpq(1)], r - 1, r, value=r)

    @property
    def is_rational(self):
        return self.value is not None

    def refine(self):
        if self.value is not None:
            return
        p, lo, hi = self.poly, self.lo, self.hi
        mid = (lo + hi) / 2
        pm = upoly.evaluate(p, mid)
        if pm == 0:
            self.lo, self.hi, self.value = lo, mid, mid
            return
        ph = upoly.evaluate(p, hi)
        if ph == 0 or (ph > 0) != (pm > 0):
            self.lo = mid
        else:
            self.hi = mid

    def refine_to(self, width):
        while self.value is None and self.hi - self.lo > width:
            self.refine()

    def quadratic_form(self):
        """``(u, D, s)`` with this number equal to ``u + s * sqrt(D)``, for irrational
        roots of quadratics; ``None`` otherwise."""
        if self.value is not None or len(self.poly) != 3:
            return None
        if self._quad is None:
            c0, c1, c2 = self.poly
            u = -c1 / (2 * c2)
            D = (c1 * c1 - 4 * c2 * c0) / (4 * c2 * c2)
            s = 1 if self.lo >= u else -1 if self.hi <= u else self.cmp_rational(u)
            self._quad = (u, D, s)
        return self._quad

    def cmp_rational(self, r):
        """Exact comparison with a rational; returns LT/EQ/GT."""
        if self.value is not None:
            return sign(self.value - r)
        if r <= self.lo:
            return GT
        if r > self.hi:
            return LT
        if self._quad is not None:
            u, D, s = self._quad
            return _sign_root_sum(u - r, s, D)
        p = self.poly
        pr = upoly.evaluate(p, r)
        if pr == 0:
            return EQ
        if r == self.hi:
            return LT
        ph = upoly.evaluate(p, self.hi)
        if ph == 0 or (ph > 0) != (pr > 0):
            # root in (r, hi]
            self.lo = r
            return GT
        self.hi = r
        return LT

    def sign_of(self, h):
        """Exact sign of the polynomial ``h`` at this number."""
        h = upoly.trim(h)
        if not h:
            return 0
        if self.value is not None:
            return sign(upoly.evaluate(h, self.value))
        if len(h) == 1:
            return sign(h[0])
        g = upoly.gcd(self.poly, h)
        if len(g) > 1 and sturm_count(g, self.lo, self.hi) > 0:
            return 0
        while True:
            a, b = upoly.interval_eval(h, self.lo, self.hi)
            if a > 0:
                return 1
            if b < 0:
                return -1
            self.refine()
            if self.value is not None:
                return sign(upoly.evaluate(h, self.value))

    def approx(self):
        if self.value is not None:
            return float(self.value)
        self.refine_to(mpq(1, 2**40) * max(1, abs(self.hi)))
        if self.value is not None:
            return float(self.value)
        return float((self.lo + self.hi) / 2)

    def __float__(self):
        return self.approx()

    def __eq__(self, other):
        return compare(self, other) == EQ

    def __lt__(self, other):
        return compare(self, other) == LT

    def __hash__(self):
        raise TypeError("AlgebraicNumber is not hashable")

    def __repr__(self):
        if self.value is not None:
            return f"AlgebraicNumber({self.value})"
        return f"AlgebraicNumber(root of {upoly.to_str(self.poly)} in ({self.lo}, {self.hi}])"


def _as_algebraic(x):
    if isinstance(x, AlgebraicNumber):
        return x
    return AlgebraicNumber.from_rational(x)


def _sign_root_sum(w, a, A):
    """Sign of ``w + a * sqrt(A)`` for ``a`` in {-1, 0, 1} and ``A >= 0``."""
    sw = sign(w)
    if a == 0 or A == 0:
        return sw
    if sw == 0 or sw == a:
        return a
    c = sign(w * w - A)
    return sw if c > 0 else 0 if c == 0 else a


def _sign_two_roots(w, a, A, b, B):
    """Sign of ``w + a * sqrt(A) + b * sqrt(B)`` (``a``, ``b`` in {-1, 0, 1}; ``A``, ``B >= 0``)."""
    sp = _sign_root_sum(w, a, A)
    if b == 0 or B == 0:
        return sp
    if sp == 0 or sp == b:
        return b
    # opposite signs: compare (w + a sqrt A)^2 with B
    c = _sign_root_sum(w * w + A - B, sign(a * w), 4 * w * w * A)
    return sp if c > 0 else 0 if c == 0 else b


def _compare_quadratic(qa, qb):
    ua, Da, sa = qa
    ub, Db, sb = qb
    return _sign_two_roots(ua - ub, sa, Da, -sb, Db)


def compare(a, b):
    """Exact order of two reals (rationals or algebraic numbers)."""
    a_alg = isinstance(a, AlgebraicNumber)
    b_alg = isinstance(b, AlgebraicNumber)
    if not a_alg and not b_alg:
        return sign(rat(a) - rat(b))
    if not a_alg:
        b.quadratic_form()
        return -b.cmp_rational(rat(a))
    if not b_alg:
        a.quadratic_form()
        return a.cmp_rational(rat(b))
    if a is b:
        return EQ
    if a.value is not None:
        return -b.cmp_rational(a.value)
    if b.value is not None:
        return a.cmp_rational(b.value)
    if a.hi <= b.lo:
        return LT
    if b.hi <= a.lo:
        return GT
    qa = a.quadratic_form()
    if qa is not None:
        qb = b.quadratic_form()
        if qb is not None:
            return _compare_quadratic(qa, qb)
    g = upoly.gcd(a.poly, b.poly)
    if len(g) > 1 and sturm_count(g, a.lo, a.hi) > 0:
        # a is a root of g, hence of b.poly; equal iff a lies in b's interval
        if a.cmp_rational(b.lo) == GT and a.cmp_rational(b.hi) != GT:
            return EQ
        return LT if a.cmp_rational(b.lo) != GT else GT
    while True:
        if a.hi <= b.lo:
            return LT
        if b.hi <= a.lo:
            return GT
        if a.hi - a.lo >= b.hi - b.lo:
            a.refine()
        else:
            b.refine()
        if a.value is not None:
            return -b.cmp_rational(a.value)
        if b.value is not None:
            return a.cmp_rational(b.value)


def isolate_real_roots(p):
    """Ascending isolating intervals for the distinct real roots of ``p``."""
    p = upoly.trim(p)
    if not p:
        raise ZeroPolynomial("isolate_real_roots of the zero polynomial")
    if len(p) == 3:
        c0, c1, c2 = p
        if c1 * c1 != 4 * c2 * c0:
            return _quadratic_roots(p)
        r = -c1 / (2 * c2)
        return [AlgebraicNumber([-r, mpq(1)], r - 1, r, r)]
    sf = upoly.squarefree(p)
    if len(sf) == 3:
        return _quadratic_roots(sf)
    return [AlgebraicNumber(sf, lo, hi, value) for lo, hi, value in _isolate_cached(_key(sf))]


def _quadratic_roots(sf):
    """Closed-form isolation for a square-free quadratic: ``u -/+ sqrt(D)``."""
    c0, c1, c2 = sf
    u = -c1 / (2 * c2)
    D = (c1 * c1 - 4 * c2 * c0) / (4 * c2 * c2)
    if D <= 0:
        return []
    num, den = int(D.numerator), int(D.denominator)
    m = isqrt(num * den)
    if m * m == num * den:
        r = mpq(m, den)
        return [AlgebraicNumber(sf, u - r - 1, u - r, u - r), AlgebraicNumber(sf, u + r - 1, u + r, u + r)]
    # m / den < sqrt(D) < (m + 1) / den
    lo_s, hi_s = mpq(m, den), mpq(m + 1, den)
    below = AlgebraicNumber(sf, u - hi_s, u - lo_s)
    above = AlgebraicNumber(sf, u + lo_s, u + hi_s)
    below._quad = (u, D, -1)
    above._quad = (u, D, 1)
    return [below, above]


@lru_cache(maxsize=65536)
def _isolate_cached(key):
    sf = list(key)
    if len(sf) == 1:
        return ()
    if len(sf) == 2:
        r = -sf[0] / sf[1]
        return ((r - 1, r, r),)
    seq = _sturm_cached(key)
    bound = upoly.cauchy_bound(sf)
    out = []

    def var(x):
        return _variations(_signs_at(seq, x))

    stack = [(-bound, bound, var(-bound), var(bound))]
    while stack:
        lo, hi, vlo, vhi = stack.pop()
        n = vlo - vhi
        if n == 0:
            continue
        if n == 1:
            value = hi if upoly.evaluate(sf, hi) == 0 else None
            out.append((lo, hi, value))
            continue
        mid = (lo + hi) / 2
        vmid = var(mid)
        stack.append((lo, mid, vlo, vmid))
        stack.append((mid, hi, vmid, vhi))
    out.sort(key=lambda t: t[1])
    return tuple(out)


def real_roots_count(p):
    return sturm_count(p)


def roots_below(p, b):
    """``(count of distinct real roots < b, whether b is a root)``."""
    p = upoly.trim(p)
    if not p:
        raise ZeroPolynomial("roots_below of the zero polynomial")
    n = len(p) - 1
    if n == 0:
        return 0, False
    if n == 1:
        r = -p[0] / p[1]
        return (1 if r < b else 0), r == b
    on = upoly.evaluate(p, b) == 0
    if n == 2:
        return _quadratic_roots_below(p, b, on)
    below = sturm_count(p, NEG_INF, b)
    if on:
        below -= 1
    return below, on


def _quadratic_roots_below(p, b, on):
    c0, c1, c2 = p
    disc = c1 * c1 - 4 * c2 * c0
    if disc < 0:
        return 0, False
    if disc == 0:
        r = -c1 / (2 * c2)
        return (1 if r < b else 0), on
    # two distinct roots r1 < r2; vertex v = -c1/(2 c2) lies strictly between
    v = -c1 / (2 * c2)
    pb = upoly.evaluate(p, b) * sign(c2)
    if on:
        return (0 if b < v else 1), True
    if pb < 0:
        return 1, False
    return (0 if b < v else 2), False
