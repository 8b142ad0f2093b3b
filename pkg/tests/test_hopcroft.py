import random
from fractions import Fraction

import pytest

from kpol.algebra import MultiPoly, parse_poly
from kpol.algebra.poly import monomials
from kpol.counters import SignTestCounter
from kpol.exceptions import ArityMismatch, DegenerateDimensions, IndexOutOfRange, InvalidRange
from kpol.hopcroft import (
    EngineConfig,
    IncidenceQuery,
    batch_predicates,
    brute_pairs,
    detect,
    main_term_exponents,
    sign_query,
)


def _sgn(v):
    return (v > 0) - (v < 0)


def random_query(rng, t, s, N, M, degree, product_points=True):
    terms = {e: rng.randint(-3, 3) for e in monomials(t + s, degree) if rng.random() < 0.5}
    terms[tuple(1 if i == 0 else 0 for i in range(t + s))] = rng.choice([-1, 1])
    terms[tuple(1 if i == t else 0 for i in range(t + s))] = rng.choice([-1, 1])
    F = MultiPoly(t + s, terms)

    def pts(dim, count):
        if product_points:
            side = max(1, round(count ** (1 / dim)))
            axes = [sorted(rng.sample(range(-12, 13), min(side, 25))) for _ in range(dim)]
            out = [()]
            for ax in axes:
                out = [p + (v,) for p in out for v in ax]
            return out[:count]
        return [tuple(rng.randint(-6, 6) for _ in range(dim)) for _ in range(count)]

    P, Q = pts(t, N), pts(s, M)
    # plant an incidence half of the time by fixing the constant term
    if rng.random() < 0.5 and P and Q:
        p, q = rng.choice(P), rng.choice(Q)
        F = F - F.evaluate(list(p) + list(q))
    return IncidenceQuery(t, s, F, P, Q)


def test_examples():
    F = parse_poly("x1*x3 + x2 - x4", 4)
    rep = detect(IncidenceQuery(2, 2, F, [(1, 1)], [(1, 2)]))
    assert rep.decision
    assert not detect(IncidenceQuery(2, 2, F, [], [(1, 2)])).decision
    assert not detect(IncidenceQuery(2, 2, F, [(1, 1)], [])).decision


def test_query_validation():
    with pytest.raises(ArityMismatch):
        IncidenceQuery(2, 2, parse_poly("x1 + x2", 3), [(1, 1)], [(1, 2)])
    with pytest.raises(ArityMismatch):
        IncidenceQuery(2, 2, parse_poly("x1 + x4", 4), [(1, 1, 1)], [(1, 2)])
    with pytest.raises(InvalidRange):
        EngineConfig(r=1)
    with pytest.raises(InvalidRange):
        EngineConfig(n0=0)


def test_zero_surface_fast_path():
    F = parse_poly("x1*x3 - x1*x4", 4)
    rep = detect(IncidenceQuery(2, 2, F, [(1, 2), (3, 4)], [(5, 5), (1, 2)]))
    assert rep.decision
    pi, qi = rep.witness
    assert F.evaluate(list(rep_point(pi, qi))) == 0
    full = detect(IncidenceQuery(2, 2, F, [(1, 2), (3, 4)], [(5, 5), (1, 2)]), EngineConfig(stop_at_first=False))
    assert [sign_query(full.sign_map, i, 0) for i in range(2)] == [0, 0]


def rep_point(pi, qi):
    return [(1, 2), (3, 4)][pi] + [(5, 5), (1, 2)][qi]


CASES = [(2, 2, 200, 200, 2), (2, 3, 120, 150, 2), (3, 3, 100, 100, 3), (3, 6, 40, 60, 2)]


@pytest.mark.parametrize("t,s,N,M,deg", CASES)
def test_detect_matches_all_pairs(t, s, N, M, deg):
    for seed in range(75):
        rng = random.Random(seed * 31 + t * 7 + s)
        n = rng.randint(1, N)
        m = rng.randint(1, M)
        q = random_query(rng, t, s, n, m, rng.randint(1, deg), product_points=seed % 3 != 0)
        expect = brute_pairs(q)
        cfg = EngineConfig(r=rng.choice([4, 8]), n0=rng.choice([4, 16]))
        rep = detect(q, cfg)
        assert rep.decision == bool(expect), seed
        if rep.decision:
            pi, qi = rep.witness
            assert q.F.evaluate(list(q.P[pi]) + list(q.Q[qi])) == 0


def test_sign_map_exact_and_complete():
    rng = random.Random(5)
    for seed in range(30):
        t, s = rng.choice([(2, 2), (2, 3), (3, 3)])
        q = random_query(rng, t, s, rng.randint(10, 100), rng.randint(10, 100), 2)
        rep = detect(q, EngineConfig(r=4, n0=4, stop_at_first=False))
        smap = rep.sign_map
        seen = {}
        for pi, qi, v in smap.resolved():
            assert (pi, qi) not in seen
            seen[pi, qi] = v
        assert len(seen) == len(q.P) * len(q.Q)
        for (pi, qi), v in seen.items():
            direct = _sgn(q.F.evaluate(list(q.P[pi]) + list(q.Q[qi])))
            assert v == direct
            assert sign_query(smap, pi, qi) == direct
        if not rep.decision:
            assert all(v != 0 for v in seen.values())


def test_sign_query_index_error():
    F = parse_poly("x1 - x2", 2)
    rep = detect(IncidenceQuery(1, 1, F, [(1,)], [(2,)]), EngineConfig(stop_at_first=False))
    with pytest.raises(IndexOutOfRange):
        sign_query(rep.sign_map, 1, 0)


def test_large_products_recurse():
    rng = random.Random(9)
    for _ in range(10):
        q = random_query(rng, 2, 2, 400, 400, 2)
        cfg = EngineConfig(r=8, n0=16, stop_at_first=False)
        rep = detect(q, cfg)
        assert rep.sign_map.depth() >= 1
        assert len(list(rep.sign_map.resolved())) == len(q.P) * len(q.Q)


def test_batch_predicates_sum_rule():
    rng = random.Random(1)
    pts = [tuple(rng.randint(-9, 9) for _ in range(3)) for _ in range(20)]
    prm = [tuple(rng.randint(-9, 9) for _ in range(3)) for _ in range(20)]
    F = parse_poly("x1 + x2 + x3 - x4 - x5 - x6", 6)

    def member(pi, qi):
        return sum(pts[pi]) < sum(prm[qi])

    counter = SignTestCounter()
    table = batch_predicates(pts, prm, F, member, EngineConfig(r=4, n0=2, stop_at_first=False), counter)
    for pi in range(20):
        for qi in range(20):
            assert table(pi, qi) == member(pi, qi)
    assert counter.sign_tests < 20 * 20 * 3


def test_batch_constant_cells_one_call():
    pts = [(i, j) for i in range(5) for j in range(5)]
    prm = [(100 + i,) for i in range(4)]
    calls = []

    def member(pi, qi):
        calls.append((pi, qi))
        return pts[pi][0] + pts[pi][1] < prm[qi][0]

    F = parse_poly("x1 + x2 - x3", 3)
    table = batch_predicates(pts, prm, F, member, EngineConfig(r=4, n0=2, stop_at_first=False))
    assert all(table(pi, qi) for pi in range(len(pts)) for qi in range(len(prm)))
    assert len(calls) <= 4 * len(prm)


def test_batch_tie_reproduced():
    pts = [(1,), (2,), (3,)]
    prm = [(2,)]

    def member(pi, qi):
        return "tie" if pts[pi][0] == prm[qi][0] else pts[pi][0] < prm[qi][0]

    table = batch_predicates(pts, prm, parse_poly("x1 - x2", 2), member, EngineConfig(n0=1, stop_at_first=False))
    assert [table(i, 0) for i in range(3)] == [True, "tie", False]


def test_batch_unfiltered_equals_direct():
    pts = [(i,) for i in range(7)]
    prm = [(j,) for j in range(5)]
    table = batch_predicates(pts, prm, None, lambda a, b: (a * b) % 3, EngineConfig(n0=2, stop_at_first=False))
    assert all(table(a, b) == (a * b) % 3 for a in range(7) for b in range(5))


def test_main_term_exponents():
    assert main_term_exponents(2, 2) == (Fraction(2, 3), Fraction(2, 3))
    assert main_term_exponents(3, 6) == (Fraction(15, 17), Fraction(12, 17))
    assert main_term_exponents(3, 3) == (Fraction(3, 4), Fraction(3, 4))
    with pytest.raises(DegenerateDimensions):
        main_term_exponents(1, 1)
