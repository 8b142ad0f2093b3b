"""k-POL instances, seeded generators, serialization and the affine reduction."""

import json
import random
from dataclasses import dataclass, field

from gmpy2 import mpq

from kpol.algebra.poly import MultiPoly, format_poly, monomials, parse_poly
from kpol.algebra.rat import format_rat, parse_rat, rat
from kpol.algebra.resultant import _subset_det
from kpol.exceptions import (
    ArityMismatch,
    DimensionMismatch,
    InvalidRange,
    KTooSmall,
    LeadingCoeffVanishes,
    NotLinearInLastVar,
    ParseError,
)


class KPolInstance:
    """``k`` sorted sets of rationals and a polynomial ``F`` of arity ``k``.

    Sets keep duplicates; solvers work on the distinct values.  Instances
    are treated as immutable.
    """

    __slots__ = ("k", "sets", "F", "meta")

    def __init__(self, sets, F, meta=None):
        sets = tuple(tuple(sorted(rat(v) for v in s)) for s in sets)
        if len(sets) < 2:
            raise KTooSmall(f"k = {len(sets)} < 2")
        if F.arity != len(sets):
            raise ArityMismatch(f"F has arity {F.arity} but there are {len(sets)} sets")
        self.k = len(sets)
        self.sets = sets
        self.F = F
        self.meta = dict(meta or {})

    @property
    def n(self):
        return max((len(s) for s in self.sets), default=0)

    def distinct(self, i):
        """Distinct values of set ``i`` in ascending order."""
        out = []
        for v in self.sets[i]:
            if not out or out[-1] != v:
                out.append(v)
        return out

    def is_empty(self):
        return any(not s for s in self.sets)

    def with_sets(self, sets, **meta):
        return KPolInstance(sets, self.F, {**self.meta, **meta})

    def __eq__(self, other):
        if not isinstance(other, KPolInstance):
            return NotImplemented
        return self.sets == other.sets and self.F == other.F and self.meta == other.meta

    def __repr__(self):
        sizes = ",".join(str(len(s)) for s in self.sets)
        return f"KPolInstance(k={self.k}, sizes=[{sizes}], F={self.F.to_text()!r})"


@dataclass(frozen=True)
class Witness:
    """One value from each set on which ``F`` vanishes, with its set positions."""

    values: tuple
    indices: tuple = ()

    def check(self, F):
        return F.evaluate(self.values) == 0

    def as_text(self):
        return "(" + ",".join(format_rat(v) for v in self.values) + ")"


@dataclass
class CurveFamily:
    """``k`` parametric curves in R^d; ``params[i][j]`` is ``f_{i,j}`` as a univariate MultiPoly."""

    d: int
    params: list = field(default_factory=list)

    def __post_init__(self):
        if self.d < 2:
            raise DimensionMismatch("ambient dimension must be at least 2")
        clean = []
        for row in self.params:
            if len(row) != self.d:
                raise DimensionMismatch(f"curve has {len(row)} coordinates, expected {self.d}")
            clean.append([p if isinstance(p, MultiPoly) else MultiPoly.from_univariate(p) for p in row])
        self.params = clean

    @property
    def k(self):
        return len(self.params)

    def point(self, i, t):
        t = rat(t)
        return [f.evaluate([t]) for f in self.params[i]]


def figure1_family():
    """Three planar curves: (t, t^2/5 + 2), (t, t^3/5), (t, 2t - 4)."""
    fifth = mpq(1, 5)
    return CurveFamily(
        2,
        [
            [[0, 1], [2, 0, fifth]],
            [[0, 1], [0, 0, 0, fifth]],
            [[0, 1], [-4, 2]],
        ],
    )


def _check_range(name, lo_hi):
    lo, hi = lo_hi
    if lo > hi:
        raise InvalidRange(f"{name} = ({lo}, {hi}) is empty")
    return int(lo), int(hi)


def generate_random(k, n, degree_bound=2, coeff_range=(-5, 5), value_range=(-20, 20), seed=0, terms=None):
    """Seeded random instance with integer values and a sparse integer ``F``.

    ``F`` has total degree at most ``degree_bound`` and depends on every
    variable.  Set values are distinct whenever ``value_range`` is wide
    enough, so each set has exactly ``n`` distinct values.
    """
    if k < 2:
        raise KTooSmall(f"k = {k} < 2")
    if n < 0:
        raise InvalidRange("n must be nonnegative")
    if degree_bound < 1:
        raise InvalidRange("degree_bound must be at least 1")
    clo, chi = _check_range("coeff_range", coeff_range)
    vlo, vhi = _check_range("value_range", value_range)
    coeffs = [c for c in range(clo, chi + 1) if c]
    if not coeffs:
        raise InvalidRange("coeff_range contains no nonzero integer")
    rng = random.Random(seed)
    pool = [e for e in monomials(k, degree_bound) if any(e)]
    count = terms if terms is not None else k + 1
    chosen = {}
    for e in rng.sample(pool, min(count, len(pool))):
        chosen[e] = rng.choice(coeffs)
    for i in range(k):
        if not any(e[i] for e in chosen):
            e = tuple(1 if j == i else 0 for j in range(k))
            chosen[e] = rng.choice(coeffs)
    if rng.random() < 0.5:
        chosen[(0,) * k] = rng.choice(coeffs)
    F = MultiPoly(k, chosen)
    span = range(vlo, vhi + 1)
    if len(span) >= n:
        sets = [rng.sample(span, n) for _ in range(k)]
    else:
        sets = [[rng.randint(vlo, vhi) for _ in range(n)] for _ in range(k)]
    return KPolInstance(sets, F, {"seed": seed, "family": "random"})


def _linear_split(F):
    """``F = a * x_k + b`` with ``a``, ``b`` free of ``x_k``."""
    last = F.arity - 1
    if F.degree_in(last) != 1:
        raise NotLinearInLastVar(f"F has degree {F.degree_in(last)} in x{F.arity}")
    coeffs = F.coefficients_in(last)
    return coeffs[1], coeffs[0]


def plant_solution(instance, seed=0, retries=32):
    """Insert into the last set the root that completes a random prefix."""
    a, b = _linear_split(instance.F)
    prefix_sets = instance.sets[:-1]
    if any(not s for s in prefix_sets):
        raise LeadingCoeffVanishes("an empty prefix set leaves nothing to complete")
    rng = random.Random(seed)
    for _ in range(retries):
        prefix = [rng.choice(s) for s in prefix_sets] + [mpq(0)]
        lead = a.evaluate(prefix)
        if lead:
            root = -b.evaluate(prefix) / lead
            sets = list(instance.sets)
            sets[-1] = sets[-1] + (root,)
            family = instance.meta.get("family", "custom")
            return instance.with_sets(sets, family=f"{family}+planted", plant_seed=seed)
    raise LeadingCoeffVanishes(f"leading coefficient vanished on {retries} drawn prefixes")


def _determinant(rows, arity):
    if not rows:
        return MultiPoly.constant(arity, 1)
    return _subset_det(
        rows,
        lambda x, y: x * y,
        lambda x, y: x + y,
        lambda x, y: x - y,
        MultiPoly.zero(arity),
        lambda x: x.is_zero(),
    )


def affine_reduce(family, param_sets, meta=None):
    """Collinearity-type instance: ``F`` is the determinant of rows ``(1, f_i1(x_i), ..., f_id(x_i))``.

    ``F`` vanishes on a parameter tuple exactly when the ``d + 1`` points
    lie on a common hyperplane.
    """
    k = family.k
    if k != family.d + 1:
        raise DimensionMismatch(f"{k} curves in R^{family.d}; project to R^{k - 1} first")
    if len(param_sets) != k:
        raise DimensionMismatch(f"{len(param_sets)} parameter sets for {k} curves")
    one = MultiPoly.constant(k, 1)
    rows = [[one] + [f.extend(k, [i]) for f in family.params[i]] for i in range(k)]
    F = _determinant(rows, k)
    tags = {"family": "affine", **(meta or {})}
    return KPolInstance(param_sets, F, tags)


def generic_project(points, target_dim, seed=0, spread=7):
    """Apply a seeded random integer linear map R^d -> R^target_dim."""
    points = [[rat(x) for x in p] for p in points]
    d = len(points[0]) if points else target_dim
    if any(len(p) != d for p in points):
        raise DimensionMismatch("points of mixed dimension")
    if target_dim > d or target_dim < 1:
        raise DimensionMismatch(f"cannot project R^{d} to R^{target_dim}")
    if target_dim == d:
        return points
    rng = random.Random(seed)
    matrix = [[mpq(rng.randint(-spread, spread)) for _ in range(d)] for _ in range(target_dim)]
    return [[sum((row[j] * p[j] for j in range(d)), mpq(0)) for row in matrix] for p in points]


def to_dict(instance):
    return {
        "k": instance.k,
        "sets": [[format_rat(v) for v in s] for s in instance.sets],
        "poly": format_poly(instance.F),
        "meta": instance.meta,
    }


def from_dict(data):
    try:
        k = data["k"]
        raw_sets = data["sets"]
        text = data["poly"]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"missing field: {exc}") from exc
    if not isinstance(k, int) or isinstance(k, bool) or k < 2:
        raise ParseError(f"bad k: {k!r}")
    if not isinstance(raw_sets, list) or len(raw_sets) != k:
        raise ParseError(f"expected {k} sets")
    if "arity" in data and data["arity"] != k:
        raise ParseError(f"poly arity {data['arity']} differs from k = {k}")
    if not isinstance(text, str):
        raise ParseError("poly must be a string")
    sets = []
    for s in raw_sets:
        if not isinstance(s, list) or not all(isinstance(t, str) for t in s):
            raise ParseError("each set must be a list of rational strings")
        sets.append([parse_rat(t) for t in s])
    F = parse_poly(text, k)
    meta = data.get("meta", {})
    if not isinstance(meta, dict):
        raise ParseError("meta must be an object")
    return KPolInstance(sets, F, meta)


def dumps(instance):
    return json.dumps(to_dict(instance), indent=1, sort_keys=True) + "\n"


def loads(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc
    return from_dict(data)


def save(instance, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(instance))


def load(path):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def circle_instance(n, seed=0, value_range=(-10**4, 10**4), solvable=True):
    """Sets of ``n`` distinct integers with ``F = x1^2 + x2^2 - x3^2 - x4^2``.

    The curves ``F(x, y, c, d) = 0`` are circles centred at the origin.
    With ``solvable`` false, ``A`` and ``B`` hold odd values, ``C`` even and
    ``D`` odd ones, so ``a^2 + b^2 = 2`` and ``c^2 + d^2 = 1 (mod 4)`` and
    the instance has no solution.
    """
    vlo, vhi = _check_range("value_range", value_range)
    rng = random.Random(seed)
    if solvable:
        pools = [range(vlo, vhi + 1)] * 4
    else:
        odd = [v for v in range(vlo, vhi + 1) if v % 2]
        even = [v for v in range(vlo, vhi + 1) if v % 2 == 0]
        pools = [odd, odd, even, odd]
    if any(len(p) < n for p in pools):
        raise InvalidRange("value_range too small for n distinct values")
    sets = [rng.sample(pool, n) for pool in pools]
    F = MultiPoly(4, {(2, 0, 0, 0): 1, (0, 2, 0, 0): 1, (0, 0, 2, 0): -1, (0, 0, 0, 2): -1})
    return KPolInstance(sets, F, {"seed": seed, "family": "circle"})


def ksum_instance(k, n, seed=0, value_range=None, solvable=True):
    """Plain ``k``-SUM: ``F = x1 + ... + xk`` with ``n`` distinct integers per set.

    With ``solvable`` false every value is ``1 (mod k + 1)``, so every sum is
    ``k (mod k + 1)`` and the instance has no solution.
    """
    if k < 2:
        raise KTooSmall(f"k = {k} < 2")
    step = 1 if solvable else k + 1
    span = value_range or (-step * (n**2 + 8), step * (n**2 + 8))
    vlo, vhi = _check_range("value_range", span)
    pool = range(vlo, vhi + 1) if solvable else [v for v in range(vlo, vhi + 1) if v % step == 1]
    if len(pool) < n:
        raise InvalidRange("value_range too small for n distinct values")
    rng = random.Random(seed)
    sets = [rng.sample(pool, n) for _ in range(k)]
    F = MultiPoly(k, {tuple(1 if j == i else 0 for j in range(k)): 1 for i in range(k)})
    return KPolInstance(sets, F, {"seed": seed, "family": "ksum" if solvable else "ksum-no"})


def xyzw_instance(n, seed=0, value_range=(-30, 30)):
    """``F = x1*x2 + x3 + x4`` with ``n`` distinct integers per set."""
    vlo, vhi = _check_range("value_range", value_range)
    if vhi - vlo + 1 < n:
        raise InvalidRange("value_range too small for n distinct values")
    rng = random.Random(seed)
    sets = [rng.sample(range(vlo, vhi + 1), n) for _ in range(4)]
    F = MultiPoly(4, {(1, 1, 0, 0): 1, (0, 0, 1, 0): 1, (0, 0, 0, 1): 1})
    return KPolInstance(sets, F, {"seed": seed, "family": "xyzw"})


def collinear_triple(family, t1, t2):
    """Parameter of the third curve on the line through the points at ``t1`` and ``t2``.

    Needs ``family`` to be planar with curves ``(t, g_i(t))`` and the third
    curve a non-vertical line; returns None when the two lines are parallel.
    """
    p1, p2 = family.point(0, t1), family.point(1, t2)
    slope = (p2[1] - p1[1]) / (p2[0] - p1[0])
    fx, fy = family.params[2]
    if fx != MultiPoly.var(1, 0) or fy.degree > 1:
        raise DimensionMismatch("third curve must be (t, a + b t)")
    a = fy.evaluate([mpq(0)])
    b = fy.evaluate([mpq(1)]) - a
    if slope == b:
        return None
    return (p1[1] - slope * p1[0] - a) / (b - slope)


def figure1_instance(n, seed=0, collinear=True, value_range=(-12, 12)):
    """Three-curve collinearity instance with a planted triple.

    Each parameter set holds ``n - 1`` random elevenths plus one planted value;
    the planted triple is collinear, or with ``collinear`` false, its third
    parameter is shifted by ``1/7`` off the line.
    """
    if n < 1:
        raise InvalidRange("n must be at least 1")
    vlo, vhi = _check_range("value_range", value_range)
    family = figure1_family()
    rng = random.Random(seed)
    while True:
        t1 = mpq(rng.randint(vlo, vhi), rng.randint(1, 3))
        t2 = mpq(rng.randint(vlo, vhi), rng.randint(1, 3))
        if t1 == t2:
            continue
        t3 = collinear_triple(family, t1, t2)
        if t3 is not None:
            break
    if not collinear:
        t3 += mpq(1, 7)
    # fractional fillers rarely form accidental collinear triples
    sets = [[mpq(rng.randint(vlo * 11, vhi * 11), 11) for _ in range(n - 1)] for _ in range(3)]
    for s, t in zip(sets, (t1, t2, t3)):
        s.append(t)
    tags = {"seed": seed, "family": "collinear" if collinear else "collinear-control"}
    return affine_reduce(family, sets, tags)


FAMILIES = ("random", "planted", "ksum", "ksum-no", "xyzw", "circle", "circle-no", "collinear", "collinear-control")


def linear_random(k, n, seed=0, value_range=(-30, 30), degree_bound=2):
    """``generate_random`` redrawn until ``F`` is linear in the last variable."""
    for attempt in range(256):
        inst = generate_random(k, n, degree_bound, value_range=value_range, seed=seed * 1009 + attempt)
        if inst.F.degree_in(k - 1) == 1:
            return inst.with_sets(inst.sets, seed=seed)
    raise NotLinearInLastVar("no linear draw in 256 attempts")


def make_instance(family, k, n, seed=0):
    """Instance of a named family; families with a fixed arity check ``k``."""
    fixed = {"xyzw": 4, "circle": 4, "circle-no": 4, "collinear": 3, "collinear-control": 3}
    if family not in FAMILIES:
        raise ParseError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    if family in fixed and k != fixed[family]:
        raise ArityMismatch(f"family {family} has k = {fixed[family]}")
    if family == "random":
        return generate_random(k, n, 2, value_range=(-30, 30), seed=seed)
    if family == "planted":
        if n < 1:
            raise InvalidRange("planted needs n >= 1")
        return plant_solution(linear_random(k, max(n - 1, 1), seed), seed=seed)
    if family in ("ksum", "ksum-no"):
        return ksum_instance(k, n, seed, solvable=family == "ksum")
    if family == "xyzw":
        return xyzw_instance(n, seed)
    if family in ("circle", "circle-no"):
        span = max(30, 4 * n)
        inst = circle_instance(n, seed, (-span, span), solvable=family == "circle")
        return inst.with_sets(inst.sets, family=family)
    return figure1_instance(n, seed, collinear=family == "collinear")
