"""Arrangements of plane algebraic curves: x-monotone arcs, order types and point location.

A curve ``f(x, y) = 0`` is cut at its critical x-values (real roots of the
leading coefficient in ``y`` and of the discriminant in ``y``) into arcs; on
each open interval between consecutive critical values the real ``y``-roots
are counted from below and arc ``j`` follows the ``j``-th.  Vertical line
components (the content of ``f`` in ``y``) and curves with an identically
vanishing discriminant are kept aside and tested directly.

The combinatorial description of a pair or triple of curves is a *record*:
the merged order of the relevant critical values and intersection
x-values, plus the vertical interleaving of branches between consecutive
values.  Records are what a predicate oracle returns, either computed
exactly or read from a precomputed table; the order type and the point
location structure are built from records alone.
"""

from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from functools import cmp_to_key
from math import floor

from gmpy2 import mpq

from kpol.algebra import upoly
from kpol.algebra.resultant import bivariate_resultant_y
from kpol.algebra.roots import EQ, GT, LT, AlgebraicNumber, compare, isolate_real_roots, roots_below
from kpol.counters import SignTestCounter
from kpol.exceptions import CoincidentCurves, InconsistentOrderType, ZeroPolynomial

ABOVE, ON, BELOW = 1, 0, -1


# curves and arcs


def simplest_between(lo, hi):
    """The rational with the smallest denominator (then numerator) in the open interval ``(lo, hi)``."""
    if lo < 0 < hi:
        return mpq(0)
    if hi <= 0:
        return -simplest_between(-hi, -lo)
    fl = floor(lo)
    if fl + 1 < hi:
        return mpq(fl + 1)
    if lo == fl:
        return fl + mpq(1, floor(1 / (hi - fl)) + 1)
    return fl + 1 / simplest_between(1 / (hi - fl), 1 / (lo - fl))


def rational_between(a, b):
    """A simple rational strictly between ``a < b``; ``None`` stands for an infinite end."""
    if a is None and b is None:
        return mpq(0)
    if a is None:
        lo = b.value if b.value is not None else b.lo
        return mpq(min(0, floor(lo) - 1))
    if b is None:
        hi = a.value if a.value is not None else a.hi
        return mpq(max(0, floor(hi) + 1))
    while True:
        left = a.value if a.value is not None else a.hi
        right = b.value if b.value is not None else b.lo
        if left < right:
            return simplest_between(left, right)
        if a.value is None and (b.value is not None or a.hi - a.lo >= b.hi - b.lo):
            a.refine()
        else:
            b.refine()


def _rows_at(rows, x):
    return upoly.trim([upoly.evaluate(r, x) for r in rows])


def _deriv_y(rows):
    return [upoly.scale(r, i) for i, r in enumerate(rows)][1:]


class PlaneCurve:
    """Real-algebraic analysis of ``f(x, y) = 0`` for a MultiPoly ``f`` of arity 2."""

    def __init__(self, poly, cid=0, key=None):
        if poly.arity != 2:
            raise ValueError("plane curves need a polynomial in (x, y)")
        if poly.is_zero():
            raise ZeroPolynomial("the zero polynomial is not a curve")
        self.poly = poly
        self.cid = cid
        self.key = key
        self._y_roots = {}
        self._memo_open = True
        rows = [upoly.trim(r) for r in poly.to_bivariate(0, 1)]
        content = []
        for r in rows:
            if r:
                content = upoly.gcd(content, r) if content else upoly.monic(r)
        self.verticals = isolate_real_roots(content) if len(content) > 1 else []
        rows = [upoly.exact_div(r, content) if r else [] for r in rows]
        while rows and not rows[-1]:
            rows.pop()
        self.rows = rows
        self.dy = len(rows) - 1
        self.exceptional = False
        self.crit = []
        self.counts = []
        if self.dy <= 0:
            return
        disc = bivariate_resultant_y(rows, _deriv_y(rows)) if self.dy > 1 else list(rows[-1])
        if not upoly.trim(disc):
            self.exceptional = True
            return
        crit_poly = upoly.squarefree(upoly.mul(rows[-1], disc))
        self.crit = isolate_real_roots(crit_poly) if len(crit_poly) > 1 else []
        for x in self.crit:
            x.quadratic_form()
        bounds = [None] + self.crit + [None]
        self.samples = [rational_between(bounds[g], bounds[g + 1]) for g in range(len(self.crit) + 1)]
        self.counts = [len(self.y_roots(s)) for s in self.samples]
        self._memo_open = False

    @property
    def has_arcs(self):
        return not self.exceptional and any(self.counts)

    def at(self, x):
        """Dense univariate polynomial ``f(x, .)`` (content removed)."""
        return _rows_at(self.rows, x)

    def y_roots(self, x):
        """Real roots of ``f(x, .)`` in ascending order.

        Only the curve's own sample abscissae are memoized; other points are
        one-off, and keeping them would make curves shared by many records grow.
        """
        roots = self._y_roots.get(x)
        if roots is None:
            p = self.at(x)
            roots = isolate_real_roots(p) if len(p) > 1 else []
            for r in roots:
                r.quadratic_form()
            if self._memo_open:
                self._y_roots[x] = roots
        return roots

    def gap_range(self, g):
        lo = self.crit[g - 1] if g > 0 else None
        hi = self.crit[g] if g < len(self.crit) else None
        return lo, hi

    def contains(self, a, b):
        return self.poly.evaluate([a, b]) == 0


@dataclass
class CurveArc:
    """Branch ``branch`` (from below) of ``curve`` over the open x-interval ``(lo, hi)``."""

    curve: PlaneCurve
    gap: int
    branch: int
    lo: object = None
    hi: object = None
    aid: int = 0

    @property
    def source(self):
        return self.curve.poly

    @property
    def x_range(self):
        return self.lo, self.hi


def curve_arcs(curve):
    out = []
    if curve.exceptional:
        return out
    for g, count in enumerate(curve.counts):
        lo, hi = curve.gap_range(g)
        for j in range(count):
            out.append(CurveArc(curve, g, j, lo, hi))
    return out


def decompose_x_monotone(poly):
    """x-monotone arcs of the curve ``poly(x, y) = 0``."""
    curve = poly if isinstance(poly, PlaneCurve) else PlaneCurve(poly)
    arcs = curve_arcs(curve)
    for i, arc in enumerate(arcs):
        arc.aid = i
    return arcs


def point_vs_arc(arc, a, b, p=None):
    """ABOVE / ON / BELOW of the point ``(a, b)`` relative to ``arc`` (``a`` inside its x-range)."""
    if p is None:
        p = arc.curve.at(a)
    below, on = roots_below(p, b)
    j = arc.branch
    if on and below == j:
        return ON
    return ABOVE if below > j else BELOW


# records


def _sort_groups(items, cmp):
    """Sort ``(tag, value)`` items and group equal values."""
    items = sorted(items, key=cmp_to_key(lambda u, v: cmp(u[1], v[1])))
    groups = []
    for item in items:
        if groups and cmp(groups[-1][0][1], item[1]) == EQ:
            groups[-1].append(item)
        else:
            groups.append([item])
    return groups


def _interleave(ys_u, ys_v, cmp):
    out = []
    i = j = 0
    while i < len(ys_u) or j < len(ys_v):
        if j == len(ys_v) or (i < len(ys_u) and cmp(ys_u[i], ys_v[j]) == LT):
            out.append(0)
            i += 1
        else:
            out.append(1)
            j += 1
    return tuple(out)


def _res(cu, cv):
    R = upoly.trim(bivariate_resultant_y(cu.rows, cv.rows))
    if not R:
        raise CoincidentCurves("curves share a component")
    return R


def _roots_of(R):
    return isolate_real_roots(R) if len(R) > 1 else []


def pair_record(cu, cv, cmp=compare):
    """Merged order of the critical values of both curves and the x-roots of ``Res_y``,
    with the branch interleaving on every open interval in between."""
    if not (cu.has_arcs and cv.has_arcs):
        return ("trivial",)
    try:
        R = _res(cu, cv)
    except CoincidentCurves:
        return ("coincident",)
    items = [(("u", i), x) for i, x in enumerate(cu.crit)]
    items += [(("v", i), x) for i, x in enumerate(cv.crit)]
    items += [(("r", i), x) for i, x in enumerate(_roots_of(R))]
    groups = _sort_groups(items, cmp)
    bounds = [None] + [g[0][1] for g in groups] + [None]
    inter = []
    for t in range(len(groups) + 1):
        s = rational_between(bounds[t], bounds[t + 1])
        inter.append(_interleave(cu.y_roots(s), cv.y_roots(s), cmp))
    return ("ok", tuple(tuple(tag for tag, _ in g) for g in groups), tuple(inter))


def triple_record(cu, cv, cw, cmp=compare):
    """Merged order of the critical values of three curves and the x-roots of
    ``Res_y(u, v)`` and ``Res_y(u, w)``."""
    try:
        Ruv = _res(cu, cv)
        Ruw = _res(cu, cw)
    except CoincidentCurves:
        return ("coincident",)
    items = []
    for tag, c in (("u", cu), ("v", cv), ("w", cw)):
        items += [((tag, i), x) for i, x in enumerate(c.crit)]
    items += [(("ruv", i), x) for i, x in enumerate(_roots_of(Ruv))]
    items += [(("ruw", i), x) for i, x in enumerate(_roots_of(Ruw))]
    groups = _sort_groups(items, cmp)
    return ("ok", tuple(tuple(tag for tag, _ in g) for g in groups))


def record_position(record):
    """Map tag -> group index for a triple or pair record."""
    pos = {}
    for gi, grp in enumerate(record[1]):
        for tag in grp:
            pos[tag] = gi
    return pos


@dataclass
class Crossing:
    u: int
    v: int
    k: int
    rank: int
    pair: tuple
    group: int
    x: object = None
    slot: int = -1
    cid: int = 0


@dataclass
class PairInfo:
    """Arc-level facts for a pair of curves, derived from their record."""

    record: tuple
    crossings: list = field(default_factory=list)
    start_below: dict = field(default_factory=dict)
    positions: dict = field(default_factory=dict)
    roots: list = None


def pair_info(cu, cv, record, arcs_u, arcs_v):
    """Crossings between arcs of two curves and their order where both first exist.

    ``arcs_u`` maps ``(gap, branch)`` to arc ids.  ``start_below[(a, b)]`` is
    True when arc ``a`` lies below arc ``b`` at the start of their common
    x-range.
    """
    info = PairInfo(record)
    if record[0] != "ok":
        return info
    groups, inter = record[1], record[2]
    info.positions = record_position(record)
    gap_u = [0]
    gap_v = [0]
    for grp in groups:
        gap_u.append(gap_u[-1] + sum(1 for t in grp if t[0] == "u"))
        gap_v.append(gap_v[-1] + sum(1 for t in grp if t[0] == "v"))

    def positions(t):
        pu, pv = [], []
        for p, side in enumerate(inter[t]):
            (pu if side == 0 else pv).append(p)
        return pu, pv

    seen = set()
    counts = {}
    for t in range(len(inter)):
        pu, pv = positions(t)
        for j, a in enumerate(pu):
            for jj, b in enumerate(pv):
                ka = arcs_u[(gap_u[t], j)]
                kb = arcs_v[(gap_v[t], jj)]
                if (ka, kb) not in seen:
                    seen.add((ka, kb))
                    info.start_below[(ka, kb)] = a < b
        if t == len(groups):
            continue
        grp = groups[t]
        rtags = [tag for tag in grp if tag[0] == "r"]
        if not rtags or any(tag[0] in ("u", "v") for tag in grp):
            continue
        nu, nv = positions(t + 1)
        for j, a in enumerate(pu):
            for jj, b in enumerate(pv):
                if (a < b) != (nu[j] < nv[jj]):
                    ka = arcs_u[(gap_u[t], j)]
                    kb = arcs_v[(gap_v[t], jj)]
                    k = counts.get((ka, kb), 0)
                    counts[(ka, kb)] = k + 1
                    info.crossings.append(Crossing(ka, kb, k, rtags[0][1], (cu.cid, cv.cid), t))
    return info


def pair_intersections(arc_a, arc_b):
    """Intersections of two arcs of distinct curves: ``(x, k, tangency)`` in ascending x.

    Crossings (the arcs swap vertical order) get consecutive indices ``k``;
    touching points where the order is kept are reported with the tangency
    flag set and ``k = None``.  Touching is decided exactly at rational x
    and by the order test alone otherwise.
    """
    cu, cv = arc_a.curve, arc_b.curve
    if cu.poly.normalized() == cv.poly.normalized():
        raise CoincidentCurves("arcs lie on the same curve")
    record = pair_record(cu, cv)
    if record[0] == "coincident":
        raise CoincidentCurves("curves share a component")
    if record[0] != "ok":
        return []
    R = _res(cu, cv)
    roots = _roots_of(R)
    out = []
    k = 0
    for t, grp in enumerate(record[1]):
        rtags = [tag for tag in grp if tag[0] == "r"]
        if not rtags or any(tag[0] in ("u", "v") for tag in grp):
            continue
        x = roots[rtags[0][1]]
        if not _inside(x, arc_a) or not _inside(x, arc_b):
            continue
        flip = _flips(record, t, arc_a, arc_b, cu, cv)
        if flip:
            out.append((x, k, False))
            k += 1
        elif x.is_rational and _meet_at(arc_a, arc_b, x.value):
            out.append((x, None, True))
    return out


def _inside(x, arc):
    if arc.lo is not None and compare(x, arc.lo) != GT:
        return False
    if arc.hi is not None and compare(x, arc.hi) != LT:
        return False
    return True


def _flips(record, t, arc_a, arc_b, cu, cv):
    inter = record[2]

    def pos(tt, side, branch):
        seen = -1
        for p, sd in enumerate(inter[tt]):
            if sd == side:
                seen += 1
                if seen == branch:
                    return p
        return None

    a0, b0 = pos(t, 0, arc_a.branch), pos(t, 1, arc_b.branch)
    a1, b1 = pos(t + 1, 0, arc_a.branch), pos(t + 1, 1, arc_b.branch)
    if None in (a0, b0, a1, b1):
        return False
    return (a0 < b0) != (a1 < b1)


def _meet_at(arc_a, arc_b, x):
    ya = arc_a.curve.y_roots(x)
    yb = arc_b.curve.y_roots(x)
    if arc_a.branch >= len(ya) or arc_b.branch >= len(yb):
        return False
    return compare(ya[arc_a.branch], yb[arc_b.branch]) == EQ


# predicate oracle


class PredicateOracle:
    """Answers the comparisons needed to build and query an arrangement.

    Every exact comparison of two real numbers derived from the input
    (one sign test of a constant-degree polynomial) is counted in
    ``counter``; subclasses may serve records from a precomputed table
    instead, counting lookups.
    """

    def __init__(self, counter=None):
        self.counter = counter if counter is not None else SignTestCounter()

    def cmp(self, phase):
        counter = self.counter

        def counted(a, b):
            counter.sign(phase=phase)
            return compare(a, b)

        return counted

    def pair_record(self, cu, cv):
        return pair_record(cu, cv, self.cmp("pairwise"))

    def triple_record(self, cu, cv, cw):
        return triple_record(cu, cv, cw, self.cmp("h_predicates"))

    def h_order(self, cu, cv, cw, tag_a, tag_b, xa, xb):
        """Order of two x-values tagged as in :func:`triple_record` (centre ``cu``)."""
        self.counter.sign(phase="h_predicates")
        return compare(xa, xb)

    def crossing_roots(self, cu, cv):
        self.counter.ram()
        return _roots_of(_res(cu, cv))

    def compare_x(self, a, b, phase="query"):
        self.counter.sign(phase=phase)
        return compare(a, b)

    def arc_test(self, arc, a, b, roots=None):
        """Side of ``(a, b)`` relative to ``arc``; ``roots`` are the y-roots of its curve at ``a``."""
        self.counter.sign(phase="query")
        if roots is None:
            return point_vs_arc(arc, a, b)
        return -compare(roots[arc.branch], b)

    def on_curve(self, curve, a, b):
        self.counter.sign(phase="query")
        return curve.contains(a, b)


# order type


@dataclass
class OrderType:
    """Discrete description of an arrangement of arcs.

    ``endpoints`` are the distinct critical and vertical x-values in
    ascending order; slot ``2e + 1`` is the point ``endpoints[e]`` and slot
    ``2e`` the open gap left of it.  ``per_arc[a]`` lists, left to right,
    groups of crossing ids at a common point of arc ``a``.
    """

    curves: list
    arcs: list
    endpoints: list
    endpoint_curves: list
    vertical_curves: list
    arc_slots: list
    start_below: dict
    crossings: list
    per_arc: list
    at_minus_infinity: list
    exceptional: list

    @property
    def n_slots(self):
        return 2 * len(self.endpoints) + 1

    def pair_crossings(self, a, b):
        """Crossing ids of arcs ``a`` and ``b`` in order of their index ``k``."""
        return [c.cid for c in self.crossings if {c.u, c.v} == {a, b}]


def build_order_type(curves, oracle=None, isolate_coincident=False):
    """Order type of the arcs of ``curves`` (a list of :class:`PlaneCurve`).

    Two curves sharing a component raise :class:`CoincidentCurves`, unless
    ``isolate_coincident`` is set: then the later curve is marked
    exceptional (tested directly at query time) and the build restarts.
    """
    oracle = oracle or PredicateOracle()
    while True:
        try:
            return _build_order_type(curves, oracle)
        except CoincidentCurves as exc:
            if not isolate_coincident or not hasattr(exc, "curves"):
                raise
            curves[exc.curves[1]].exceptional = True


def _build_order_type(curves, oracle):
    for i, c in enumerate(curves):
        c.cid = i
    arcs = []
    arc_index = {}
    for c in curves:
        local = {}
        for arc in curve_arcs(c):
            arc.aid = len(arcs)
            local[(arc.gap, arc.branch)] = arc.aid
            arcs.append(arc)
        arc_index[c.cid] = local
    exceptional = [c.cid for c in curves if c.exceptional]

    # endpoints: all critical values and vertical lines, sorted exactly
    items = []
    for c in curves:
        items += [((c.cid, "c", i), x) for i, x in enumerate(c.crit)]
        items += [((c.cid, "v", i), x) for i, x in enumerate(c.verticals)]
    groups = _sort_groups(items, oracle.cmp("endpoints"))
    endpoints = [g[0][1] for g in groups]
    endpoint_of = {}
    endpoint_curves = []
    vertical_curves = []
    for e, grp in enumerate(groups):
        endpoint_curves.append(sorted({tag[0] for tag, _ in grp if tag[1] == "c"}))
        vertical_curves.append(sorted({tag[0] for tag, _ in grp if tag[1] == "v"}))
        for tag, _ in grp:
            endpoint_of[tag] = e
    E = len(endpoints)
    arc_slots = []
    for arc in arcs:
        c = arc.curve
        e_lo = endpoint_of[(c.cid, "c", arc.gap - 1)] if arc.gap > 0 else -1
        e_hi = endpoint_of[(c.cid, "c", arc.gap)] if arc.gap < len(c.crit) else E
        arc_slots.append((2 * e_lo + 2, 2 * e_hi))

    # pairs
    start_below = {}
    crossings = []
    infos = {}
    with_arcs = [c for c in curves if c.has_arcs]
    for i, cu in enumerate(with_arcs):
        for cv in with_arcs[i + 1:]:
            rec = oracle.pair_record(cu, cv)
            if rec[0] == "coincident":
                exc = CoincidentCurves(f"curves {cu.cid} and {cv.cid} share a component")
                exc.curves = (cu.cid, cv.cid)
                raise exc
            info = pair_info(cu, cv, rec, arc_index[cu.cid], arc_index[cv.cid])
            infos[(cu.cid, cv.cid)] = info
            for (a, b), below in info.start_below.items():
                start_below[(a, b)] = below
                start_below[(b, a)] = not below
            if info.crossings:
                roots = oracle.crossing_roots(cu, cv)
                for cr in info.crossings:
                    cr.x = roots[cr.rank]
                    cr.cid = len(crossings)
                    crossings.append(cr)
    for c in with_arcs:
        local = [a for a in arcs if a.curve is c]
        for a in local:
            for b in local:
                if a.aid != b.aid and a.gap == b.gap:
                    start_below[(a.aid, b.aid)] = a.branch < b.branch

    def cmp_crossing_endpoint(cr, e):
        """Order of crossing ``cr`` against endpoint ``e``."""
        u, v = cr.pair
        for tag, _ in groups[e]:
            if tag[1] != "c":
                continue
            w, i = tag[0], tag[2]
            if w in (u, v):
                info = infos[(u, v)]
                mine = info.positions[("r", cr.rank)]
                other = info.positions[("u" if w == u else "v", i)]
                return (mine > other) - (mine < other)
        tag = groups[e][0][0]
        w, kind, i = tag
        if kind == "v":
            oracle.counter.sign(phase="h_predicates")
            return compare(cr.x, endpoints[e])
        return oracle.h_order(curves[u], curves[v], curves[w], ("ruv", cr.rank), ("w", i), cr.x, endpoints[e])

    for cr in crossings:
        lo, hi = 0, E
        slot = None
        while lo < hi:
            mid = (lo + hi) // 2
            c = cmp_crossing_endpoint(cr, mid)
            if c == 0:
                slot = 2 * mid + 1
                break
            if c > 0:
                lo = mid + 1
            else:
                hi = mid
        cr.slot = slot if slot is not None else 2 * lo

    # per-arc event order
    def other_curve(cr, arc_id):
        return cr.pair[1] if arcs[arc_id].curve.cid == cr.pair[0] else cr.pair[0]

    def cmp_events(arc_id):
        u = arcs[arc_id].curve.cid

        def cmp(c1, c2):
            x1, x2 = crossings[c1], crossings[c2]
            if x1.slot != x2.slot:
                return -1 if x1.slot < x2.slot else 1
            v, w = other_curve(x1, arc_id), other_curve(x2, arc_id)
            if v == w:
                return (x1.rank > x2.rank) - (x1.rank < x2.rank)
            return oracle.h_order(
                curves[u], curves[v], curves[w], ("ruv", x1.rank), ("ruw", x2.rank), x1.x, x2.x
            )

        return cmp

    events = [[] for _ in arcs]
    for cr in crossings:
        events[cr.u].append(cr.cid)
        events[cr.v].append(cr.cid)
    per_arc = []
    for arc_id, evs in enumerate(events):
        cmp = cmp_events(arc_id)
        evs = sorted(evs, key=cmp_to_key(cmp))
        grouped = []
        for cid in evs:
            if grouped and cmp(grouped[-1][0], cid) == 0:
                grouped[-1].append(cid)
            else:
                grouped.append([cid])
        per_arc.append(grouped)

    unbounded = [a.aid for a in arcs if arc_slots[a.aid][0] == 0]
    at_minus_infinity = sorted(
        unbounded, key=cmp_to_key(lambda a, b: -1 if start_below[(a, b)] else 1)
    )
    return OrderType(
        curves,
        arcs,
        endpoints,
        endpoint_curves,
        vertical_curves,
        arc_slots,
        start_below,
        crossings,
        per_arc,
        at_minus_infinity,
        exceptional,
    )


# level structure


@dataclass
class Level:
    """Occupant of one level across the node's x-range: ``occupants[i]`` holds
    from vertex ``i - 1`` (exclusive) to vertex ``i``."""

    vertices: list
    occupants: list
    slots: list = None


@dataclass
class Node:
    lo: int
    hi: int
    arcs: list = field(default_factory=list)
    levels: list = field(default_factory=list)
    left: object = None
    right: object = None


class LevelStructure:
    """Segment tree over slots; each node holds the arcs spanning it and their levels."""

    def __init__(self, order_type):
        self.ot = order_type
        self.root = self._build_tree(0, order_type.n_slots - 1)
        for arc in order_type.arcs:
            lo, hi = order_type.arc_slots[arc.aid]
            if lo <= hi:
                self._insert(self.root, lo, hi, arc.aid)
        self._pair_slots = {}
        for cr in order_type.crossings:
            self._pair_slots.setdefault((cr.u, cr.v), []).append(cr.slot)
            self._pair_slots.setdefault((cr.v, cr.u), []).append(cr.slot)
        for slots in self._pair_slots.values():
            slots.sort()
        for node in self._nodes():
            if node.arcs:
                self._sweep(node)

    def _build_tree(self, lo, hi):
        node = Node(lo, hi)
        if lo < hi:
            mid = (lo + hi) // 2
            node.left = self._build_tree(lo, mid)
            node.right = self._build_tree(mid + 1, hi)
        return node

    def _insert(self, node, lo, hi, aid):
        if lo <= node.lo and node.hi <= hi:
            node.arcs.append(aid)
            return
        for child in (node.left, node.right):
            if child is not None and not (hi < child.lo or child.hi < lo):
                self._insert(child, lo, hi, aid)

    def _nodes(self):
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            for child in (node.left, node.right):
                if child is not None:
                    stack.append(child)

    def _below_at_start(self, a, b, slot):
        """Whether arc ``a`` is below arc ``b`` just left of ``slot`` (both alive there)."""
        base = self.ot.start_below[(a, b)]
        flips = bisect_left(self._pair_slots.get((a, b), ()), slot)
        return base != (flips % 2 == 1)

    def _sweep(self, node):
        ot = self.ot
        members = set(node.arcs)
        order = sorted(
            node.arcs,
            key=cmp_to_key(lambda a, b: -1 if self._below_at_start(a, b, node.lo) else 1),
        )
        pos = {a: i for i, a in enumerate(order)}
        crossings = ot.crossings
        queues = {}
        for a in node.arcs:
            q = []
            for grp in ot.per_arc[a]:
                kept = [
                    c
                    for c in grp
                    if node.lo <= crossings[c].slot <= node.hi
                    and (crossings[c].u if crossings[c].v == a else crossings[c].v) in members
                ]
                if kept:
                    q.append(kept)
            queues[a] = q
        heads = {a: 0 for a in node.arcs}
        levels = [Level([], [a]) for a in order]
        remaining = sum(len(q) for q in queues.values())
        work = list(order)

        def head(a):
            q = queues[a]
            return q[heads[a]] if heads[a] < len(q) else None

        def partner(c, a):
            cr = crossings[c]
            return cr.v if cr.u == a else cr.u

        while remaining:
            progressed = False
            while work:
                a = work.pop()
                block = self._ready_block(a, head, partner, pos)
                if block is None:
                    continue
                progressed = True
                crossing_pairs = set()
                rep = None
                for m in block:
                    for c in head(m):
                        crossing_pairs.add(frozenset((m, partner(c, m))))
                        rep = c
                lo = min(pos[m] for m in block)
                before = sorted(block, key=lambda m: pos[m])

                def after_cmp(p, q):
                    below = pos[p] < pos[q]
                    if frozenset((p, q)) in crossing_pairs:
                        below = not below
                    return -1 if below else 1

                after = sorted(before, key=cmp_to_key(after_cmp))
                for offset, m in enumerate(after):
                    level = levels[lo + offset]
                    if level.occupants[-1] != m:
                        level.vertices.append(rep)
                        level.occupants.append(m)
                    order[lo + offset] = m
                    pos[m] = lo + offset
                for m in block:
                    remaining -= 1
                    heads[m] += 1
                for m in block:
                    work.append(m)
                for nb in (lo - 1, lo + len(block)):
                    if 0 <= nb < len(order):
                        work.append(order[nb])
            if remaining and not progressed:
                raise InconsistentOrderType("sweep stalled: crossing events do not match the vertical order")
            if remaining:
                work = [a for a in order if head(a) is not None]
        for level in levels:
            level.slots = [crossings[c].slot for c in level.vertices]
        node.levels = levels

    @staticmethod
    def _ready_block(a, head, partner, pos):
        first = head(a)
        if first is None:
            return None
        block = {a}
        stack = [a]
        while stack:
            m = stack.pop()
            grp = head(m)
            if grp is None:
                return None
            for c in grp:
                p = partner(c, m)
                pg = head(p)
                if pg is None or c not in pg:
                    return None
                if p not in block:
                    block.add(p)
                    stack.append(p)
        span = sorted(pos[m] for m in block)
        if span[-1] - span[0] + 1 != len(block):
            return None
        return block

    # queries

    def slot_of(self, a, oracle):
        """Slot of the rational ``a`` by binary search over the endpoints."""
        eps = self.ot.endpoints
        lo, hi = 0, len(eps)
        while lo < hi:
            mid = (lo + hi) // 2
            c = oracle.compare_x(eps[mid], a)
            if c == EQ:
                return 2 * mid + 1
            if c == LT:
                lo = mid + 1
            else:
                hi = mid
        return 2 * lo

    def path(self, slot):
        node = self.root
        while node is not None:
            yield node
            if node.left is None:
                return
            node = node.left if slot <= node.left.hi else node.right


@dataclass
class Location:
    kind: str
    below: int
    slot: int
    arc: object = None
    curve: object = None


def build_pointloc(order_type):
    """Point-location structure built from the order type alone."""
    return LevelStructure(order_type)


class _QueryCache:
    """Outcomes that depend only on the query abscissa; reset when it changes.

    Holds the y-roots of curves at ``a``, the slab of ``a`` and the level
    occupants found there, so queries sharing ``a`` repeat no x-comparison.
    For queries fed with increasing ``b`` it also keeps, per node, how many
    levels lie below the previous query point.
    """

    def __init__(self):
        self.a = None
        self._reset(None)

    def _reset(self, a):
        self.a = a
        self.roots = {}
        self.slot = None
        self.occupants = {}
        self.b = None
        self.level_floors = {}

    def floors(self, b):
        """Per-node level counts below the previous query; kept only while ``b`` increases."""
        if self.b is None or not b > self.b:
            self.level_floors = {}
        self.b = b
        return self.level_floors

    def y_roots(self, curve, a):
        if self.a != a:
            self._reset(a)
        r = self.roots.get(curve.cid)
        if r is None:
            p = curve.at(a)
            r = self.roots[curve.cid] = isolate_real_roots(p) if len(p) > 1 else []
        return r

    def slot_of(self, structure, a, oracle):
        if self.a != a:
            self._reset(a)
        if self.slot is None:
            self.slot = structure.slot_of(a, oracle)
        return self.slot

    def occupant(self, level, slot, a, crossings, oracle):
        key = id(level)
        arc_id = self.occupants.get(key)
        if arc_id is None:
            arc_id = self.occupants[key] = _occupant(level, slot, a, crossings, oracle)
        return arc_id


def locate(structure, query, oracle=None, cache=None):
    """Locate ``(a, b)``; returns a :class:`Location` (kind ``ON``, ``ABOVE_ALL`` or ``FACE``)."""
    oracle = oracle or PredicateOracle()
    a, b = mpq(query[0]), mpq(query[1])
    ot = structure.ot
    cache = cache or _QueryCache()
    for cid in ot.exceptional:
        if oracle.on_curve(ot.curves[cid], a, b):
            return Location("ON", 0, -1, curve=cid)
    slot = cache.slot_of(structure, a, oracle)
    if slot % 2 == 1:
        e = slot // 2
        for cid in ot.endpoint_curves[e] + ot.vertical_curves[e]:
            if oracle.on_curve(ot.curves[cid], a, b):
                return Location("ON", 0, slot, curve=cid)
    # levels below an earlier point on this vertical line stay below
    floors = cache.floors(b)
    below = 0
    alive = 0
    crossings = ot.crossings

    def side_of(i):
        arc_id = cache.occupant(node.levels[i], slot, a, crossings, oracle)
        arc = ot.arcs[arc_id]
        return oracle.arc_test(arc, a, b, cache.y_roots(arc.curve, a)), arc_id, arc

    for node in structure.path(slot):
        if not node.arcs:
            continue
        alive += len(node.arcs)
        key = id(node)
        lo, hi = floors.get(key, 0), len(node.levels)
        if key in floors:
            # gallop up from the floor, then bisect
            step = 1
            while lo < hi:
                probe = min(lo + step - 1, hi - 1)
                side, arc_id, arc = side_of(probe)
                if side == ON:
                    return Location("ON", below + probe, slot, arc=arc_id, curve=arc.curve.cid)
                if side == ABOVE:
                    lo = probe + 1
                    step *= 2
                else:
                    hi = probe
                    break
        while lo < hi:
            mid = (lo + hi) // 2
            side, arc_id, arc = side_of(mid)
            if side == ON:
                return Location("ON", below + mid, slot, arc=arc_id, curve=arc.curve.cid)
            if side == ABOVE:
                lo = mid + 1
            else:
                hi = mid
        floors[key] = lo
        below += lo
    kind = "ABOVE_ALL" if below == alive else "FACE"
    return Location(kind, below, slot)


def _occupant(level, slot, a, crossings, oracle):
    verts = level.vertices
    if not verts:
        return level.occupants[0]
    slots = level.slots
    lo = bisect_left(slots, slot)
    hi = bisect_right(slots, slot)
    # vertices strictly left of the slot are passed, strictly right are not
    while lo < hi:
        mid = (lo + hi) // 2
        c = oracle.compare_x(crossings[verts[mid]].x, a)
        if c == GT:
            hi = mid
        else:
            lo = mid + 1
    return level.occupants[lo]


def direct_locate(curves, a, b):
    """Reference answer without any structure: ``(on, below)``.

    ``below`` counts, over curves for which ``a`` is not a critical or
    vertical x-value, the real ``y``-roots of ``f(a, .)`` strictly below ``b``.
    """
    a, b = mpq(a), mpq(b)
    on = any(c.contains(a, b) for c in curves)
    below = 0
    for c in curves:
        if c.exceptional or c.dy <= 0:
            continue
        if any(compare(x, a) == EQ for x in c.crit + c.verticals):
            continue
        p = c.at(a)
        if len(p) > 1:
            below += roots_below(p, b)[0]
    return on, below
