"""4-POL and 5-POL in the algebraic decision tree model.

The last ``k - 2`` sets are cut into blocks of ``g`` consecutive values.
Each cell of blocks owns the curves ``F(x, y, c, ...) = 0`` for its
parameter tuples; the cell's arcs get an order type and a point location
structure.  Every ``(a, b)`` in ``A x B`` is located in the cells crossed
by its dual surface ``F(a, b, .) = 0``.

In ``FREDMAN`` mode the pair and triple records that the order types need
are resolved beforehand, in batch, by the incidence engine: points are
first-coordinate tuples of curve parameters, the other parameters are the
queries, and the boundary is a product of resultants, discriminants and
leading coefficients outside whose zero set every record is constant.
Reading a resolved record is a lookup, not a sign test.
"""

import math
from array import array
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import sympy
from gmpy2 import mpq

from kpol.algebra.poly import MultiPoly
from kpol.algebra.resultant import resultant
from kpol.arrangement import (
    LevelStructure,
    PlaneCurve,
    PredicateOracle,
    _QueryCache,
    build_order_type,
    locate,
    pair_record,
    record_position,
    triple_record,
)
from kpol.baselines import found, not_found
from kpol.counters import SignTestCounter, phase_scope
from kpol.exceptions import InvalidRange, UnsupportedDegree, UnsupportedK
from kpol.hopcroft import EngineConfig, batch_predicates
from kpol.partition import build_grid, crossed_cells

DIRECT = "DIRECT"
FREDMAN = "FREDMAN"

#: counter phases grouped for reports
PHASE_GROUPS = {
    "minus_infinity": ("curves", "endpoints", "pairwise"),
    "h_batch": ("h_predicates", "batch"),
    "query": ("crossing", "query"),
}


# block size


def balance_exponent(a, b, c, d):
    """Exponent ``e`` with ``g = n^e`` solving ``n^a / g^b = n^c * g^d``."""
    a, b, c, d = (Fraction(v) for v in (a, b, c, d))
    if b + d == 0:
        raise InvalidRange("degenerate balance equation")
    return (a - c) / (b + d)


def balance_block_size(k):
    """Exponent of ``n`` in the balanced block size: 3/8 for k = 4, 13/59 for k = 5."""
    if k == 4:
        # query n^3 / g against batch (n g^2)^(3/2)
        return balance_exponent(3, 1, Fraction(3, 2), 3)
    if k == 5:
        # query n^4 / g^2 against batch n^(42/17) g^(84/17)
        return balance_exponent(4, 2, Fraction(42, 17), Fraction(84, 17))
    raise UnsupportedK(f"no block-size balance for k = {k}")


def adt_exponent(k):
    """Exponent of the balanced query cost: ``n^3 / g`` for k = 4, ``n^4 / g^2`` for k = 5."""
    e = balance_block_size(k)
    return Fraction(k - 1) - (k - 3) * e


def default_block_size(n, k):
    g = round(n ** float(balance_block_size(k)))
    return max(1, min(g, max(n, 1)))


@dataclass
class AdtConfig:
    g: int = None
    mode: str = FREDMAN
    engine: EngineConfig = field(default_factory=lambda: EngineConfig(stop_at_first=False))

    def __post_init__(self):
        if self.mode not in (DIRECT, FREDMAN):
            raise InvalidRange(f"mode must be {DIRECT} or {FREDMAN}")
        if self.g is not None and self.g < 1:
            raise InvalidRange("g must be at least 1")


# boundary of the record regions


@dataclass
class HBoundary:
    """Boundary factors for records of ``m`` curves (``None``: no filter) and the
    membership procedure deciding a record exactly."""

    m: int
    factors: list
    membership: object
    degenerate: bool = False


def _curve_polys(F, m):
    """``f_i(x, y)`` with symbolic parameters; variable layout ``x, y, c_1..c_m, rest_1, .., rest_m``."""
    j = F.arity - 2
    arity = 2 + m * j
    V = MultiPoly.variables(arity)
    out = []
    for i in range(m):
        rest = [V[2 + m + i * (j - 1) + r] for r in range(j - 1)]
        out.append(F.compose([V[0], V[1], V[2 + i]] + rest))
    return out, arity


def _x_factors(P, Q=None, max_deg=8):
    """Factors in the parameters for the root structure of x-polynomials."""
    if Q is None:
        d = P.degree_in(0)
        if d <= 0:
            return [P]
        out = [P.coefficients_in(0)[-1]]
        if d >= 2:
            if 2 * d - 1 > max_deg:
                raise UnsupportedDegree("x-degree too large for the symbolic boundary")
            out.append(resultant(P, P.derivative(0), 0))
        return out
    dp, dq = P.degree_in(0), Q.degree_in(0)
    if dp <= 0 and dq <= 0:
        return []
    # the resultant with a polynomial free of x is a power of it
    if dq <= 0:
        return [Q]
    if dp <= 0:
        return [P]
    if P.degree_in(0) + Q.degree_in(0) > max_deg:
        raise UnsupportedDegree("x-degree too large for the symbolic boundary")
    return [resultant(P, Q, 0)]


def _irreducible(P, max_terms):
    """Distinct irreducible non-constant factors of ``P`` over the rationals."""
    if len(P.terms) > max_terms:
        raise UnsupportedDegree("boundary factor too large")
    gens = sympy.symbols(f"v0:{P.arity}")
    expr = sympy.Poly.from_dict(
        {e: sympy.Rational(int(c.numerator), int(c.denominator)) for e, c in P.terms.items()}, *gens
    )
    out = []
    for fac, _ in expr.factor_list()[1]:
        if fac.total_degree() == 0:
            continue
        terms = {e: mpq(int(c.p), int(c.q)) for e, c in fac.as_dict().items()}
        out.append(MultiPoly(P.arity, terms).normalized())
    return out


def _split_factors(polys, arity_out, max_terms):
    """Drop x, y; split into distinct irreducible non-constant factors."""
    seen = {}
    for P in polys:
        P = P.substitute({0: 0, 1: 0}, drop=True)
        if P.is_zero():
            return None
        if P.is_constant():
            continue
        for Q in _irreducible(P, max_terms):
            seen[Q] = True
    return list(seen)


class _Degenerate(Exception):
    pass


def _distinct_factors(polys, max_terms):
    """Irreducible factors involving ``x`` of the given x-polynomials; ``None`` if one is zero."""
    seen = {}
    for P in polys:
        if P.is_zero():
            return None
        if P.degree_in(0) <= 0:
            seen[P] = True
            continue
        for Q in _irreducible(P, max_terms):
            seen[Q] = True
    return list(seen)


def build_H_boundary(F, m=3, bank=None, max_terms=400):
    """Boundary and membership for records of ``m`` curves (2: pairs, 3: triples).

    The factors are: per curve the leading coefficient and discriminant in
    ``y`` and the resultant of the leading coefficient with ``f(x, 0)``;
    the resultants ``R_1j = Res_y(f_1, f_j)``; and, for the distinct
    irreducible factors of these x-polynomials, their leading coefficients
    and discriminants in ``x`` and their pairwise resultants in ``x``.  Their product vanishes
    wherever the merged order of critical and intersection x-values, or the
    branch interleaving between them, can change.  ``factors`` is ``None``
    when the construction is too large (every box is then crossed) and the
    boundary is flagged degenerate when it vanishes identically.
    """
    if F.arity not in (4, 5):
        raise UnsupportedK(f"records need k in (4, 5), got {F.arity}")
    deg_xy = max((e[0] + e[1] for e in F.terms), default=0)
    if deg_xy > 3:
        raise UnsupportedDegree(f"degree {deg_xy} in the curve variables exceeds 3")
    bank = bank or CurveBank(F)
    j = F.arity - 2

    def split(point, param):
        rest = [tuple(param[i * (j - 1):(i + 1) * (j - 1)]) for i in range(m)]
        return [bank.get(point[i], rest[i]) for i in range(m)]

    record = pair_record if m == 2 else triple_record
    # many pairs share a record; keep one copy of each
    seen = {}

    def membership(point, param):
        rec = record(*split(point, param))
        return seen.setdefault(rec, rec)

    factors = None
    degenerate = False
    try:
        fs, arity = _curve_polys(F, m)
        xpolys = []
        raw = []
        for f in fs:
            dy = f.degree_in(1)
            if dy <= 0:
                continue
            coeffs = f.coefficients_in(1)
            lc, c0 = coeffs[-1], coeffs[0]
            disc = resultant(f, f.derivative(1), 1) if dy > 1 else lc
            xpolys += [lc, disc]
            raw += _x_factors(lc, c0)
        for f in fs[1:]:
            if fs[0].degree_in(1) > 0 and f.degree_in(1) > 0:
                xpolys.append(resultant(fs[0], f, 1))
        # square factors would make discriminants vanish identically
        xpolys = _distinct_factors(xpolys, max_terms)
        if xpolys is None:
            raise _Degenerate
        for i, P in enumerate(xpolys):
            raw += _x_factors(P)
            for Q in xpolys[i + 1:]:
                raw += _x_factors(P, Q)
        factors = _split_factors(raw, arity - 2, max_terms)
        if factors is None:
            degenerate = True
    except _Degenerate:
        factors, degenerate = None, True
    except UnsupportedDegree:
        factors = None
    return HBoundary(m, factors, membership, degenerate)


# curves and tables


class CurveBank:
    """Memoized plane curves ``F(x, y, c, *rest) = 0`` keyed by ``(c, rest)``."""

    def __init__(self, F):
        self.F = F
        self.curves = {}

    def get(self, c, rest):
        key = (mpq(c), tuple(mpq(v) for v in rest))
        curve = self.curves.get(key)
        if curve is None:
            assignment = {2: key[0]}
            for i, v in enumerate(key[1]):
                assignment[3 + i] = v
            P = self.F.substitute(assignment, drop=True)
            curve = None if P.is_zero() else PlaneCurve(P, key=key)
            self.curves[key] = curve
        return curve


class _Indexer:
    def __init__(self):
        self.index = {}
        self.items = []

    def add(self, item):
        i = self.index.get(item)
        if i is None:
            i = self.index[item] = len(self.items)
            self.items.append(item)
        return i


class TableOracle(PredicateOracle):
    """Serves pair and triple records from batch tables; reading one is a lookup."""

    def __init__(self, counter, pairs, triples):
        super().__init__(counter)
        self.pairs = pairs
        self.triples = triples
        self._positions = {}

    def pair_record(self, cu, cv):
        table, points, params = self.pairs
        pi = points.index[(cu.key[0], cv.key[0])]
        qi = params.index[cu.key[1] + cv.key[1]]
        return table.query(pi, qi, self.counter)

    def h_order(self, cu, cv, cw, tag_a, tag_b, xa, xb):
        key = (cu.key, cv.key, cw.key)
        pos = self._positions.get(key)
        if pos is None:
            table, points, params = self.triples
            pi = points.index[(cu.key[0], cv.key[0], cw.key[0])]
            qi = params.index[cu.key[1] + cv.key[1] + cw.key[1]]
            pos = self._positions[key] = record_position(table.query(pi, qi, self.counter))
        a, b = pos[tag_a], pos[tag_b]
        return (a > b) - (a < b)


def _record_has_crossing(record):
    if record[0] != "ok":
        return False
    groups, inter = record[1], record[2]
    for t, grp in enumerate(groups):
        if any(tag[0] == "r" for tag in grp) and not any(tag[0] in ("u", "v") for tag in grp):
            if inter[t] != inter[t + 1]:
                return True
    return False


# the solver


@dataclass
class _Cell:
    block: tuple
    curves: list


def _distinct_curves(bank, values_first, rest_tuples):
    """Curves of a cell, one per zero set; identically zero curves are reported separately."""
    curves, keys, zero = [], set(), None
    for c in values_first:
        for rest in rest_tuples:
            curve = bank.get(c, rest)
            if curve is None:
                if zero is None:
                    zero = (c, rest)
                continue
            norm = curve.poly.normalized()
            if norm in keys:
                continue
            keys.add(norm)
            curves.append(curve)
    return curves, zero


def _solve_adt(instance, k, config, solver_name):
    if instance.k != k:
        raise UnsupportedK(f"{solver_name} needs k = {k}, got {instance.k}")
    config = config or AdtConfig()
    counter = SignTestCounter()
    if instance.is_empty():
        return not_found(counter, solver_name)
    axes = [instance.distinct(i) for i in range(k)]
    n = max(len(a) for a in axes)
    g = config.g or default_block_size(n, k)
    counter.event("block_size", g)
    F = instance.F
    bank = CurveBank(F)
    grid = build_grid(axes[2:], g)
    A, B = axes[0], axes[1]

    def block_values(axis, j):
        s, e = grid.blocks[axis][j]
        return grid.axes[axis][s:e]

    # curves per cell, analysed directly
    cells = {}
    with phase_scope(counter, "curves"):
        for cid in grid.cell_ids():
            firsts = block_values(0, cid[0])
            rests = list(product(*(block_values(a, cid[a]) for a in range(1, k - 2))))
            curves, zero = _distinct_curves(bank, firsts, rests)
            for curve in curves:
                counter.sign(len(curve.crit) + len(curve.counts) + 1)
            if zero is not None:
                c, rest = zero
                return found(instance, (A[0], B[0], c) + tuple(rest), counter, solver_name)
            cells[cid] = _Cell(cid, curves)

    if config.mode == FREDMAN:
        oracle = _fredman_oracle(F, k, grid, cells, bank, config, counter, block_values)
    else:
        oracle = PredicateOracle(counter)

    # crossing tests first, bucketed per cell in (a, b) order with b ascending
    with phase_scope(counter, "query"):
        counter.sign(len(B) * max(1, math.ceil(math.log2(max(len(B), 2)))))
    buckets = {cid: array("q") for cid in cells}
    for ai, a in enumerate(A):
        for bi, b in enumerate(B):
            dual = F.substitute({0: a, 1: b}, drop=True)
            counter.event("dual_surfaces")
            if dual.is_zero():
                rest = tuple(ax[0] for ax in axes[2:])
                return found(instance, (a, b) + rest, counter, solver_name)
            with phase_scope(counter, "crossing"):
                hit = crossed_cells(dual, grid, refine=0, counter=counter)
            counter.event("crossed_cells", len(hit))
            for cid in hit:
                buckets[cid].append(ai * len(B) + bi)

    # one cell at a time: build its structure, locate its points, release it;
    # consecutive points of a cell share abscissae, so levels found below
    # earlier points are reused
    for cid, cell in cells.items():
        with phase_scope(counter, "endpoints"):
            ot = build_order_type(cell.curves, oracle, isolate_coincident=True)
            structure = LevelStructure(ot)
        cache = _QueryCache()
        for idx in buckets.pop(cid):
            a, b = A[idx // len(B)], B[idx % len(B)]
            loc = locate(structure, (a, b), oracle, cache)
            if loc.kind == "ON":
                curve = ot.curves[loc.curve]
                c, rest = curve.key
                return found(instance, (a, b, c) + tuple(rest), counter, solver_name)
    return not_found(counter, solver_name)


def _fredman_oracle(F, k, grid, cells, bank, config, counter, block_values):
    """Resolve all pair records, then the triple records the crossings need, in batch."""
    engine = EngineConfig(
        r=config.engine.r,
        n0=config.engine.n0,
        allow_dual_switch=config.engine.allow_dual_switch,
        stop_at_first=False,
        refine=config.engine.refine,
    )
    pair_points, pair_params = _Indexer(), _Indexer()
    for cell in cells.values():
        curves = [c for c in cell.curves if c.has_arcs]
        for i, cu in enumerate(curves):
            for cv in curves[i + 1:]:
                pair_points.add((cu.key[0], cv.key[0]))
                pair_params.add(cu.key[1] + cv.key[1])
    pairs = _batch(F, 2, pair_points, pair_params, bank, engine, counter)
    oracle = TableOracle(counter, (pairs, pair_points, pair_params), None)

    triple_points, triple_params = _Indexer(), _Indexer()
    for cell in cells.values():
        curves = [c for c in cell.curves if c.has_arcs]
        for i, cu in enumerate(curves):
            for cv in curves[i + 1:]:
                if not _record_has_crossing(oracle.pair_record(cu, cv)):
                    continue
                for x, y in ((cu, cv), (cv, cu)):
                    for cw in cell.curves:
                        if cw is x or cw is y:
                            continue
                        triple_points.add((x.key[0], y.key[0], cw.key[0]))
                        triple_params.add(x.key[1] + y.key[1] + cw.key[1])
    triples = _batch(F, 3, triple_points, triple_params, bank, engine, counter)
    oracle.triples = (triples, triple_points, triple_params)
    return oracle


def _batch(F, m, points, params, bank, engine, counter):
    counter.event(f"batch_points_{m}", len(points.items))
    counter.event(f"batch_params_{m}", len(params.items))
    if not points.items or not params.items:
        return batch_predicates([], [], None, None, engine, counter)
    hb = build_H_boundary(F, m, bank)
    P = points.items
    Q = [tuple(v for v in q) for q in params.items]

    def membership(pi, qi):
        return hb.membership(P[pi], Q[qi])

    with phase_scope(counter, "batch"):
        return batch_predicates(P, Q, hb.factors, membership, engine, counter)


def solve_4pol(instance, config=None):
    """Decide a 4-POL instance with per-cell point location (see module docstring)."""
    return _solve_adt(instance, 4, config, "adt4")


def solve_5pol(instance, config=None):
    """Decide a 5-POL instance; cells are triples of blocks of ``C``, ``D``, ``E``."""
    return _solve_adt(instance, 5, config, "adt5")


def count_report(result):
    """Sign tests per phase group plus lookups and RAM operations, as a flat dict."""
    c = result.counters
    out = {name: sum(c.phases.get(p, 0) for p in phases) for name, phases in PHASE_GROUPS.items()}
    out["sign_tests"] = c.sign_tests
    out["lookups"] = c.lookups
    out["ram_ops"] = c.ram_ops
    return out


def brute_force_predicates(instance):
    """Sign tests of the exhaustive search: one per tuple."""
    return math.prod(len(instance.distinct(i)) for i in range(instance.k))
