import random
from itertools import combinations

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from kpol.algebra import (
    EQ,
    GT,
    LT,
    MultiPoly,
    RatInterval,
    compare,
    format_rat,
    interval_eval,
    isolate_real_roots,
    parse_poly,
    parse_rat,
    poly_eval,
    rat,
    resultant,
    root_bound,
    sturm_count,
    substitute,
    upoly,
)
from kpol.algebra.resultant import _bires_cached, _key, bivariate_resultant_y, univariate_resultant
from kpol.algebra.roots import AlgebraicNumber, _isolate_cached
from kpol.algebra.roots import _key as _root_key
from kpol.exceptions import ArityMismatch, BothZero, ParseError, ZeroPolynomial

coeffs = st.integers(-50, 50)
small = st.integers(-6, 6)


def P(text, k):
    return parse_poly(text, k)


# rationals and text forms


def test_rat_canonical():
    assert format_rat(rat(0)) == "0/1"
    assert parse_rat("-3/2") == mpq(-3, 2)
    with pytest.raises(ParseError):
        parse_rat("2/4")


@given(st.integers(-10**6, 10**6), st.integers(1, 10**6))
def test_rat_roundtrip(p, q):
    r = mpq(p, q)
    assert parse_rat(format_rat(r)) == r


@given(st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 2)), small, max_size=6))
def test_poly_text_roundtrip(terms):
    F = MultiPoly(3, terms)
    assert parse_poly(F.to_text(), 3) == F
    assert all(c != 0 for c in F.terms.values())


# evaluation and substitution


def test_poly_eval_examples():
    assert poly_eval(P("x1*x3 + x2 - x4", 4), [1, 2, 3, 5]) == 0
    assert poly_eval(MultiPoly.zero(3), [7, 8, 9]) == 0
    assert poly_eval(P("x1^2 + x2^2 - 1", 2), ["3/5", "4/5"]) == 0


def test_poly_eval_arity():
    with pytest.raises(ArityMismatch):
        poly_eval(P("x1 + x2", 2), [1])


def test_substitute_examples():
    F = P("x1 + x2 + x3 + x4", 4)
    assert substitute(F, {2: 1, 3: 2}) == P("x1 + x2 + 3", 4)
    G = P("x1*x2 + x3", 3)
    assert substitute(G, {0: 0}) == P("x3", 3)
    full = substitute(F, {0: 1, 1: 2, 2: 3, 3: 4})
    assert full.is_constant() and full.constant_value() == poly_eval(F, [1, 2, 3, 4])


@given(st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2)), small, max_size=5), small, small)
def test_substitute_then_eval(terms, x, y):
    F = MultiPoly(2, terms)
    assert substitute(F, {0: x}).evaluate([0, y]) == F.evaluate([x, y])


# resultants


def test_resultant_examples():
    assert resultant(P("x2 - x1", 2), P("x2 + x1", 2), 1) == P("2*x1", 2)
    assert resultant(P("x2^2 + x1^2 - 1", 2), P("x2 - x1", 2), 1) == P("2*x1^2 - 1", 2)
    assert resultant(P("x2^3 + x1", 2), MultiPoly.constant(2, 3), 1) == MultiPoly.constant(2, 27)
    with pytest.raises(BothZero):
        resultant(MultiPoly.zero(2), MultiPoly.zero(2), 1)


bivar = st.lists(st.lists(small, min_size=1, max_size=4), min_size=1, max_size=4)


def _dense(rows):
    return [upoly.trim([mpq(c) for c in r]) for r in rows]


@settings(max_examples=150)
@given(bivar, bivar)
def test_small_resultant_matches_sylvester(f, g):
    f, g = _dense(f), _dense(g)
    if not f[-1] or not g[-1]:
        return
    general = upoly.trim(list(_bires_cached(_key(f), _key(g))))
    assert bivariate_resultant_y(f, g) == general


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_resultant_root_property(seed):
    rng = random.Random(seed)
    x0, y0 = rng.randint(-3, 3), rng.randint(-3, 3)
    terms = lambda: {(i, j): rng.randint(-4, 4) for i in range(4) for j in range(4) if rng.random() < 0.4}
    Pp, Qq = MultiPoly(2, terms()), MultiPoly(2, terms())
    # force a common root at (x0, y0)
    Pp = Pp - Pp.evaluate([x0, y0])
    Qq = Qq - Qq.evaluate([x0, y0])
    if Pp.degree_in(1) == 0 or Qq.degree_in(1) == 0:
        return
    R = resultant(Pp, Qq, 1)
    assert R.evaluate([x0, 0]) == 0


# roots


def test_isolate_examples():
    r = isolate_real_roots([-2, 0, 1])
    assert len(r) == 2
    for a in r:
        assert sturm_count([-2, 0, 1], (a.lo, a.hi)) == 1
    assert r[0].lo < -mpq(1414, 1000) and r[1].hi > mpq(1414, 1000)
    assert isolate_real_roots([1, 0, 1]) == []
    one, two = isolate_real_roots([2, -3, 1])
    assert one.is_rational and two.is_rational
    assert {one.value, two.value} == {1, 2}
    with pytest.raises(ZeroPolynomial):
        isolate_real_roots([])


def test_sturm_examples():
    p = [-2, 0, 1]
    assert sturm_count(p) == 2
    assert sturm_count(p, (0, 10**6)) == 1
    assert sturm_count(p, (2, 3)) == 0


def test_root_bound_examples():
    assert root_bound([-2, 0, 1]) == 3
    assert root_bound([0, 1]) == 1
    assert root_bound([-8, 0, 2]) == 5


def test_compare_examples():
    s2 = isolate_real_roots([-2, 0, 1])[1]
    s3 = isolate_real_roots([-3, 0, 1])[1]
    assert compare(s2, rat("3/2")) == LT
    assert compare(isolate_real_roots([-1, 1])[0], rat(1)) == EQ
    assert compare(s2, s3) == LT
    assert compare(s3, s2) == GT


@settings(max_examples=300, deadline=None)
@given(st.lists(coeffs, min_size=2, max_size=7))
def test_isolation_certified(cs):
    p = upoly.trim([mpq(c) for c in cs])
    if len(p) < 2:
        return
    roots = isolate_real_roots(p)
    assert len(roots) == sturm_count(p)
    sf = upoly.squarefree(p)
    for a, b in zip(roots, roots[1:]):
        assert a.hi <= b.lo or compare(a, b) == LT
    for a in roots:
        if a.is_rational:
            assert upoly.evaluate(p, a.value) == 0
        else:
            assert sturm_count(sf, (a.lo, a.hi)) == 1


@settings(max_examples=200, deadline=None)
@given(small, small, st.integers(1, 6))
def test_quadratic_closed_form_matches_sturm(c0, c1, c2):
    sf = upoly.squarefree([mpq(c0), mpq(c1), mpq(c2)])
    if len(sf) != 3:
        return
    fast = isolate_real_roots(sf)
    slow = [AlgebraicNumber(sf, lo, hi, v) for lo, hi, v in _isolate_cached(_root_key(sf))]
    assert len(fast) == len(slow)
    for a, b in zip(fast, slow):
        assert compare(a, b) == EQ


def _pool(seed, size=50):
    rng = random.Random(seed)
    out = []
    while len(out) < size:
        p = upoly.trim([mpq(rng.randint(-9, 9)) for _ in range(rng.randint(2, 4))])
        if len(p) >= 2:
            out.extend(isolate_real_roots(p))
        out.append(mpq(rng.randint(-20, 20), rng.randint(1, 5)))
    return out[:size]


def test_compare_total_order():
    pool = _pool(7)
    cmp = {}
    for i, j in combinations(range(len(pool)), 2):
        c = compare(pool[i], pool[j])
        assert compare(pool[j], pool[i]) == -c
        cmp[i, j], cmp[j, i] = c, -c
    for i in range(len(pool)):
        cmp[i, i] = EQ
    n = len(pool)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if cmp[i, j] <= 0 and cmp[j, k] <= 0:
                    assert cmp[i, k] <= 0


@given(coeffs, coeffs, st.integers(1, 9))
def test_compare_against_floats(a, b, q):
    p = upoly.trim([mpq(a), mpq(b), mpq(1)])
    for r in isolate_real_roots(p):
        x = mpq(a + b, q)
        expect = (float(r) > float(x)) - (float(r) < float(x))
        if abs(float(r) - float(x)) > 1e-9:
            assert compare(r, x) == expect


def test_univariate_resultant_common_root():
    assert univariate_resultant([mpq(-1), mpq(1)], [mpq(-1), mpq(0), mpq(1)]) == 0
    assert univariate_resultant([mpq(-2), mpq(1)], [mpq(-1), mpq(0), mpq(1)]) != 0


# interval enclosures


def test_interval_examples():
    C = P("x1^2 + x2^2 - 1", 2)
    e = interval_eval(C, [RatInterval(0, mpq(1, 2)), RatInterval(0, mpq(1, 2))])
    assert e.lo >= -1 and e.hi <= mpq(-1, 2) and not e.contains_zero()
    assert interval_eval(C, [RatInterval(0, 1), RatInterval(0, 1)]).contains_zero()
    five = interval_eval(MultiPoly.constant(2, 5), [RatInterval(0, 1), RatInterval(-3, 2)])
    assert (five.lo, five.hi) == (5, 5)


@settings(max_examples=300)
@given(
    st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), small, max_size=6),
    st.lists(st.tuples(st.integers(-20, 20), st.integers(0, 10), st.integers(0, 100)), min_size=2, max_size=2),
)
def test_interval_soundness(terms, axes):
    F = MultiPoly(2, terms)
    box, point = [], []
    for lo, width, frac in axes:
        box.append(RatInterval(mpq(lo), mpq(lo + width)))
        point.append(mpq(lo) + mpq(width * frac, 100))
    enc = interval_eval(F, box)
    assert enc.lo <= F.evaluate(point) <= enc.hi
