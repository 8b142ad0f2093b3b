import random

import pytest
import sympy
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from kpol.algebra import parse_poly
from kpol.baselines import brute_force
from kpol.exceptions import (
    ArityMismatch,
    DimensionMismatch,
    InvalidRange,
    KTooSmall,
    LeadingCoeffVanishes,
    NotLinearInLastVar,
    ParseError,
)
from kpol.instance import (
    FAMILIES,
    CurveFamily,
    KPolInstance,
    affine_reduce,
    circle_instance,
    collinear_triple,
    dumps,
    figure1_family,
    figure1_instance,
    generate_random,
    generic_project,
    ksum_instance,
    load,
    loads,
    make_instance,
    plant_solution,
    save,
)


def test_instance_invariants():
    inst = KPolInstance([[3, 1, 1], [2]], parse_poly("x1 - x2", 2))
    assert inst.sets[0] == (1, 1, 3)
    assert inst.distinct(0) == [1, 3]
    with pytest.raises(ArityMismatch):
        KPolInstance([[1], [2], [3]], parse_poly("x1 - x2", 2))
    with pytest.raises(KTooSmall):
        KPolInstance([[1]], parse_poly("x1", 1))


def test_generate_random_deterministic():
    a = generate_random(4, 6, seed=11)
    b = generate_random(4, 6, seed=11)
    assert dumps(a) == dumps(b)
    assert dumps(a) != dumps(generate_random(4, 6, seed=12))


@given(st.integers(2, 5), st.integers(0, 8), st.integers(1, 3), st.integers(0, 10**6))
@settings(max_examples=60, deadline=None)
def test_generate_random_contract(k, n, deg, seed):
    inst = generate_random(k, n, deg, seed=seed)
    assert inst.F.arity == k
    assert inst.F.degree <= deg
    assert all(inst.F.depends_on(i) for i in range(k))
    assert all(len(s) == n for s in inst.sets)
    assert all(list(s) == sorted(s) for s in inst.sets)


def test_generate_random_errors():
    with pytest.raises(InvalidRange):
        generate_random(3, 4, value_range=(5, 1))
    with pytest.raises(InvalidRange):
        generate_random(3, -1)
    with pytest.raises(KTooSmall):
        generate_random(1, 3)


def test_empty_instance_is_no():
    inst = generate_random(3, 0, seed=1)
    assert inst.is_empty()
    assert brute_force(inst).decision == "NO"


def test_plant_examples():
    inst = KPolInstance([[1], [2], [5]], parse_poly("x1 + x2 + x3", 3))
    planted = plant_solution(inst, seed=0)
    assert mpq(-3) in planted.sets[2]
    assert brute_force(planted).decision == "YES"
    inst = KPolInstance([[2], [3], [1]], parse_poly("x1*x2 + x3", 3))
    assert mpq(-6) in plant_solution(inst).sets[2]
    with pytest.raises(NotLinearInLastVar):
        plant_solution(KPolInstance([[1], [1], [1]], parse_poly("x1^2 + x2^2 + x3^2 + 1", 3)))
    with pytest.raises(LeadingCoeffVanishes):
        plant_solution(KPolInstance([[0], [1], [1]], parse_poly("x1*x3 + x2", 3)))


@pytest.mark.parametrize(
    "text",
    ["x1 + x2 + x3", "x1*x2 + x3", "x1^2 - x2 + 2*x3", "x1*x2 + x2*x3 - 7", "x1^2 + x2^2 - x3"],
)
def test_plant_always_yes(text):
    F = parse_poly(text, 3)
    for seed in range(100):
        rng = random.Random(seed)
        sets = [[rng.randint(-9, 9) for _ in range(4)] for _ in range(3)]
        assert brute_force(plant_solution(KPolInstance(sets, F), seed)).decision == "YES"


# affine reduction


def _points(family, ts):
    return [family.point(i, t) for i, t in enumerate(ts)]


def _rank_collinear(points):
    M = sympy.Matrix([[1] + [sympy.Rational(int(x.numerator), int(x.denominator)) for x in p] for p in points])
    return M.rank() < len(points)


def test_affine_reduce_figure1_planted():
    fam = figure1_family()
    t1, t2 = mpq(1), mpq(3)
    t3 = collinear_triple(fam, t1, t2)
    inst = affine_reduce(fam, [[t1, 5], [t2, -2], [t3, 7]])
    assert inst.F.evaluate([t1, t2, t3]) == 0
    assert _rank_collinear(_points(fam, [t1, t2, t3]))
    res = brute_force(inst)
    assert res.decision == "YES" and res.witness.check(inst.F)


def test_affine_reduce_degenerate_and_parabola():
    line = [[0, 1], [-4, 2]]
    fam = CurveFamily(2, [line, line, line])
    inst = affine_reduce(fam, [[1, 2], [3, 4], [5, 6]])
    assert inst.F.is_zero()
    parab = [[0, 1], [0, 0, 1]]
    fam = CurveFamily(2, [parab, parab, parab])
    assert abs(affine_reduce(fam, [[-1], [0], [1]]).F.evaluate([-1, 0, 1])) == 2


def test_affine_reduce_errors():
    fam = figure1_family()
    with pytest.raises(DimensionMismatch):
        affine_reduce(fam, [[1], [2]])
    with pytest.raises(DimensionMismatch):
        affine_reduce(CurveFamily(3, [[[0, 1], [0, 0, 1], [1]]] * 3), [[1], [2], [3]])


def test_affine_reduce_matches_rank_oracle():
    fam = figure1_family()
    inst = affine_reduce(fam, [[0], [0], [0]])
    rng = random.Random(5)
    hits = 0
    for i in range(200):
        if i % 4 == 0:
            t1, t2 = mpq(rng.randint(-9, 9), 2), mpq(rng.randint(-9, 9), 3)
            t3 = collinear_triple(fam, t1, t2) if t1 != t2 else None
            if t3 is None:
                continue
        else:
            t1, t2, t3 = (mpq(rng.randint(-12, 12), rng.randint(1, 3)) for _ in range(3))
        on = inst.F.evaluate([t1, t2, t3]) == 0
        hits += on
        assert on == _rank_collinear(_points(fam, [t1, t2, t3]))
    assert hits >= 40


def test_generic_project():
    pts = [[1, 2, 3], [4, 5, 6]]
    assert generic_project(pts, 3) == [[mpq(v) for v in p] for p in pts]
    with pytest.raises(DimensionMismatch):
        generic_project(pts, 4)
    line = [[1, 2, 3], [3, 5, 7], [5, 8, 11]]
    assert _rank_collinear(generic_project(line, 2, seed=3))
    tri = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert not _rank_collinear(generic_project(tri, 2, seed=7))


def test_generic_project_preserves_answers():
    for seed in range(50):
        rng = random.Random(seed)
        d = rng.randint(3, 4)
        base = [[rng.randint(-9, 9) for _ in range(d)] for _ in range(2)]
        if seed % 2:
            s = mpq(rng.randint(-5, 5), rng.randint(1, 3))
            third = [base[0][j] + s * (base[1][j] - base[0][j]) for j in range(d)]
        else:
            third = [rng.randint(-9, 9) for _ in range(d)]
        pts = base + [third]
        assert _rank_collinear(generic_project(pts, 2, seed)) == _rank_collinear([[mpq(v) for v in p] for p in pts])


# files


def test_save_load_roundtrip(tmp_path):
    inst = generate_random(4, 5, seed=3)
    path = tmp_path / "a.json"
    save(inst, path)
    assert load(path) == inst
    assert loads(dumps(inst)) == inst


def test_load_errors():
    good = dumps(generate_random(3, 2, seed=1))
    with pytest.raises(ParseError):
        loads(good.replace('"k": 3', '"k": 4'))
    with pytest.raises(ParseError):
        loads('{"k": 2, "sets": [["2/4"], ["1/1"]], "poly": "1 * x1 + 1 * x2", "meta": {}}')
    with pytest.raises(ParseError):
        loads('{"k": 2, "sets": [["1/1"], ["1/1"]], "poly": "1 * x3", "meta": {}}')
    with pytest.raises(ParseError):
        loads("not json")


@given(st.sampled_from(FAMILIES), st.integers(0, 50))
@settings(max_examples=40, deadline=None)
def test_families_roundtrip(family, seed):
    k = {"xyzw": 4, "circle": 4, "circle-no": 4, "collinear": 3, "collinear-control": 3}.get(family, 3)
    inst = make_instance(family, k, 5, seed)
    assert loads(dumps(inst)) == inst
    assert dumps(make_instance(family, k, 5, seed)) == dumps(inst)


def test_no_families_are_no():
    for seed in range(10):
        assert brute_force(circle_instance(8, seed, (-40, 40), solvable=False)).decision == "NO"
        assert brute_force(ksum_instance(3, 8, seed, solvable=False)).decision == "NO"


def test_family_arity_checks():
    with pytest.raises(ArityMismatch):
        make_instance("circle", 3, 4)
    with pytest.raises(ParseError):
        make_instance("nope", 3, 4)


def test_figure1_instance_yes():
    for seed in range(10):
        assert brute_force(figure1_instance(6, seed)).decision == "YES"
