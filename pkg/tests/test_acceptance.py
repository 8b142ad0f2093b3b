"""Acceptance criteria 1-8; each test records one pass/fail line for the summary."""

import math
import random
from fractions import Fraction

import pytest
from conftest import record
from gmpy2 import mpq

from kpol.adt import (
    DIRECT,
    FREDMAN,
    AdtConfig,
    balance_block_size,
    count_report,
    default_block_size,
    solve_4pol,
    solve_5pol,
)
from kpol.algebra import MultiPoly
from kpol.arrangement import PlaneCurve, PredicateOracle, build_order_type, build_pointloc, direct_locate, locate
from kpol.baselines import brute_force, mitm_ksum, mitm_separable, naive_solve
from kpol.cli import exponent_table
from kpol.counters import SignTestCounter
from kpol.estimators import additive_split
from kpol.exceptions import SplitMismatch
from kpol.hopcroft import EngineConfig, IncidenceQuery, detect, main_term_exponents, sign_query
from kpol.instance import (
    KPolInstance,
    circle_instance,
    figure1_instance,
    generate_random,
    ksum_instance,
    plant_solution,
    xyzw_instance,
)
from kpol.partition import measure_crossing_exponent
from kpol.solver import kpol_exponent, solve


def test_criterion_1_exponent_formulas():
    checks = {
        "kpol_exponent": [kpol_exponent(k) for k in range(4, 9)]
        == [Fraction(8, 3), Fraction(18, 5), Fraction(9, 2), Fraction(60, 11), Fraction(32, 5)],
        "main_term(2,2)": main_term_exponents(2, 2) == (Fraction(2, 3), Fraction(2, 3)),
        "main_term(3,6)": main_term_exponents(3, 6) == (Fraction(15, 17), Fraction(12, 17)),
        "balance": (balance_block_size(4), balance_block_size(5)) == (Fraction(3, 8), Fraction(13, 59)),
        "exponents": {"adt k=4 21/8", "adt k=5 210/59"} <= set(exponent_table()),
    }
    bad = [name for name, ok in checks.items() if not ok]
    record(1, not bad, "exact" if not bad else f"mismatch in {bad}")
    assert not bad


# criterion 2: shared seeded corpus


def _maybe_plant(inst, seed):
    try:
        return plant_solution(inst, seed)
    except Exception:
        return inst


def decision_corpus():
    """Seeded instances over k in {3, 4, 5}, n in 4..16 and degree <= 3."""
    out = []
    for seed in range(520):
        rng = random.Random(seed)
        k = (3, 3, 4, 4, 5)[seed % 5]
        n = rng.randint(4, {3: 16, 4: 9, 5: 5}[k])
        kind = rng.random()
        if kind < 0.12:
            inst = ksum_instance(k, n, seed, solvable=seed % 2 == 0)
        elif kind < 0.22 and k == 4:
            inst = xyzw_instance(n, seed)
        elif kind < 0.3 and k == 4:
            inst = circle_instance(n, seed, value_range=(-15, 15), solvable=seed % 2 == 0)
        else:
            degree = rng.randint(1, 3 if k < 5 else 2)
            inst = generate_random(k, n, degree, value_range=(-30, 30), seed=seed)
            if rng.random() < 0.5:
                inst = _maybe_plant(inst, seed)
        out.append(inst)
    return out


def _solvers_for(inst):
    yield "naive", naive_solve
    yield "kpol", lambda I: solve(I, EngineConfig(r=4, n0=8))
    if inst.meta.get("family", "").startswith("ksum"):
        yield "mitm", mitm_ksum
    try:
        split = additive_split(inst.F)
    except SplitMismatch:
        split = None
    if split is not None:
        yield "separable", lambda I: mitm_separable(I, split)
    engine = EngineConfig(n0=8, stop_at_first=False)
    if inst.k == 4:
        yield "adt4-direct", lambda I: solve_4pol(I, AdtConfig(mode=DIRECT, engine=engine))
        yield "adt4-fredman", lambda I: solve_4pol(I, AdtConfig(mode=FREDMAN, engine=engine))
    if inst.k == 5:
        yield "adt5-direct", lambda I: solve_5pol(I, AdtConfig(mode=DIRECT, engine=engine))
        yield "adt5-fredman", lambda I: solve_5pol(I, AdtConfig(mode=FREDMAN, engine=engine))


def test_criterion_2_oracle_equivalence():
    corpus = decision_corpus()
    runs, bad, yes = 0, [], 0
    for i, inst in enumerate(corpus):
        ref = brute_force(inst)
        yes += ref.decision == "YES"
        for name, run in _solvers_for(inst):
            res = run(inst)
            runs += 1
            if res.decision != ref.decision or (res.witness is not None and not res.witness.check(inst.F)):
                bad.append((i, name))
    ks = sorted({inst.k for inst in corpus})
    ns = sorted({inst.n for inst in corpus})
    detail = f"{len(corpus)} instances (k {ks}, n {ns[0]}..{ns[-1]}, {yes} YES), {runs} solver runs, {len(bad)} disagreements"
    record(2, not bad and len(corpus) >= 500, detail)
    assert not bad, bad[:10]
    assert len(corpus) >= 500


def test_criterion_3_sign_map_exactness():
    total, wrong = 0, 0
    for seed in range(50):
        rng = random.Random(seed)
        t, s = rng.choice([(2, 2), (2, 3), (3, 3), (1, 2)])
        N = rng.randint(10, 100)
        M = rng.randint(10, 10**4 // N)
        terms = {}
        for _ in range(rng.randint(2, 6)):
            e = tuple(rng.randint(0, 1) for _ in range(t + s))
            terms[e] = rng.randint(-4, 4)
        terms[tuple(int(i == 0) for i in range(t + s))] = 1
        terms[tuple(int(i == t) for i in range(t + s))] = -1
        F = MultiPoly(t + s, terms)
        P = [tuple(rng.randint(-8, 8) for _ in range(t)) for _ in range(N)]
        Q = [tuple(rng.randint(-8, 8) for _ in range(s)) for _ in range(M)]
        report = detect(IncidenceQuery(t, s, F, P, Q), EngineConfig(r=4, n0=8, stop_at_first=False))
        for pi, p in enumerate(P):
            for qi, q in enumerate(Q):
                v = F.evaluate(list(p) + list(q))
                total += 1
                wrong += sign_query(report.sign_map, pi, qi) != (v > 0) - (v < 0)
    record(3, wrong == 0, f"{total - wrong}/{total} pairs exact over 50 instances")
    assert wrong == 0


def test_criterion_4_crossing_trend():
    reports = {t: measure_crossing_exponent(t, 2, [8, 16, 32, 64], trials=50, seed=1) for t in (2, 3)}
    limits = {2: 0.6, 3: 0.77}
    ok = all(reports[t].slope_mean <= limits[t] for t in (2, 3))
    detail = ", ".join(f"t={t} slope {reports[t].slope_mean:.3f} (limit {limits[t]})" for t in (2, 3))
    record(4, ok, detail)
    assert ok


def _parabolas(m, seed):
    rng = random.Random(seed)
    polys, keys = [], set()
    while len(polys) < m:
        terms = {(0, 1): 1, (2, 0): mpq(rng.randint(-20, 20), 10), (1, 0): rng.randint(-30, 30), (0, 0): rng.randint(-300, 300)}
        P = MultiPoly(2, terms)
        if P.normalized() not in keys:
            keys.add(P.normalized())
            polys.append(P)
    return rng, [PlaneCurve(p) for p in polys]


def test_criterion_5_point_location_budget():
    lines, ok = [], True
    for m in (8, 16, 32, 64, 128):
        rng, curves = _parabolas(m, m)
        structure = build_pointloc(build_order_type(curves))
        oracle = PredicateOracle(SignTestCounter())
        agree = 0
        for _ in range(1000):
            a, b = mpq(rng.randint(-4000, 4000), 100), mpq(rng.randint(-60000, 60000), 100)
            loc = locate(structure, (a, b), oracle)
            on, below = direct_locate(curves, a, b)
            agree += (loc.kind == "ON") == on and (on or loc.below == below)
        L = math.ceil(math.log2(m))
        mean = oracle.counter.sign_tests / 1000
        budget = 4 * L * L + 8 * L
        ok &= mean <= budget and agree == 1000
        lines.append(f"m={m} {mean:.1f}/{budget} agree {agree}")
    record(5, ok, "; ".join(lines))
    assert ok


def test_criterion_6_adt_trend():
    ns = (64, 128, 256)
    totals, crossed, batch = [], [], []
    for n in ns:
        res = solve_4pol(circle_instance(n, seed=n, solvable=False), AdtConfig(mode=FREDMAN))
        assert res.decision == "NO"
        g = default_block_size(n, 4)
        totals.append(res.counters.sign_tests)
        crossed.append(res.counters.events["crossed_cells"] / res.counters.events["dual_surfaces"] / (n / g))
        batch.append(count_report(res)["h_batch"])
    limit = 2**2.9
    ratios = [b / a for a, b in zip(totals, totals[1:])]
    # the exhaustive k = 4 count grows by 2^4 per doubling, the one-set-substituted count by 2^3
    reference = 2**3
    ok = all(r <= limit for r in ratios)
    detail = (
        f"sign tests {totals}, doubling ratios {[round(r, 2) for r in ratios]} (limit {limit:.2f}, reference {reference}); "
        f"crossed cells per dual / (n/g) {[round(c, 2) for c in crossed]}; h_batch {batch}"
    )
    record(6, ok, detail)
    assert ok


def test_criterion_7_accounting_identities():
    lines, ok = [], True
    for k, n in [(2, 7), (3, 6), (4, 5), (5, 4)]:
        # sum of squares plus one never vanishes, so every prefix is substituted
        F = MultiPoly(k, {**{tuple(2 * (j == i) for j in range(k)): 1 for i in range(k)}, (0,) * k: 1})
        rng = random.Random(k)
        inst = KPolInstance([rng.sample(range(-50, 50), n) for _ in range(k)], F)
        subs = naive_solve(inst).counters.events["substitutions"]
        ok &= subs == n ** (k - 1)
        lines.append(f"naive k={k} n={n} {subs}={n ** (k - 1)}")
    for k, n in [(2, 9), (4, 6), (6, 4)]:
        inst = ksum_instance(k, n, seed=k, solvable=False)
        sums = mitm_ksum(inst).counters.events["partial_sums"]
        ok &= sums == 2 * n ** (k // 2)
        lines.append(f"mitm k={k} n={n} {sums}={2 * n ** (k // 2)}")
    record(7, ok, "; ".join(lines))
    assert ok


def test_criterion_8_collinearity_pipeline():
    yes = figure1_instance(8, seed=1, collinear=True)
    no = figure1_instance(8, seed=1, collinear=False)
    got = {
        "collinear": (solve(yes).decision, brute_force(yes).decision),
        "control": (solve(no).decision, brute_force(no).decision),
    }
    witness = solve(yes).witness
    ok = got == {"collinear": ("YES", "YES"), "control": ("NO", "NO")} and witness.check(yes.F)
    record(8, ok, f"collinear kpol/brute {got['collinear']}, control kpol/brute {got['control']}")
    assert ok
