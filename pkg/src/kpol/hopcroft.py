"""Incidence detection between a point set and a family of algebraic surfaces.

Given ``F`` of arity ``t + s``, ``P`` in R^t and ``Q`` in R^s, decide whether
``F(p, q) = 0`` for some pair.  The larger side is partitioned into boxes;
surfaces of the other side that provably avoid a box get one constant sign
for the whole box, the rest recurse with the box's points.  Small
subproblems are solved by evaluating every pair.  The recursion tree itself
is the sign map: every pair is resolved at exactly one node.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from gmpy2 import mpq

from kpol.algebra.poly import MultiPoly
from kpol.counters import SignTestCounter
from kpol.exceptions import ArityMismatch, DegenerateDimensions, IndexOutOfRange, InvalidRange
from kpol.partition import box_may_vanish, box_sign, compile_terms, partition_points

PRIMAL, DUAL = 0, 1


@dataclass
class EngineConfig:
    r: int = 8
    n0: int = 64
    allow_dual_switch: bool = True
    stop_at_first: bool = True
    refine: int = 0

    def __post_init__(self):
        if self.r < 2:
            raise InvalidRange("r must be at least 2")
        if self.n0 < 1:
            raise InvalidRange("n0 must be at least 1")


@dataclass
class IncidenceQuery:
    t: int
    s: int
    F: MultiPoly
    P: list
    Q: list

    def __post_init__(self):
        if self.t < 1 or self.s < 1:
            raise ArityMismatch("t and s must be positive")
        if self.F.arity != self.t + self.s:
            raise ArityMismatch(f"F has arity {self.F.arity}, expected {self.t + self.s}")
        self.P = [tuple(mpq(x) for x in p) for p in self.P]
        self.Q = [tuple(mpq(x) for x in q) for q in self.Q]
        if any(len(p) != self.t for p in self.P):
            raise ArityMismatch(f"points of P must have {self.t} coordinates")
        if any(len(q) != self.s for q in self.Q):
            raise ArityMismatch(f"points of Q must have {self.s} coordinates")


def eval_terms(terms, point):
    total = 0
    for exps, c in terms:
        v = c
        for x, e in zip(point, exps):
            if e:
                v = v * x**e if e > 1 else v * x
        total += v
    return total


def _sgn(v):
    return (v > 0) - (v < 0)


# sign map nodes


@dataclass
class Leaf:
    table: dict = field(default_factory=dict)


@dataclass
class CellEntry:
    box: tuple
    members: tuple
    constants: dict
    child: object = None


@dataclass
class Split:
    side: int
    cells: list
    owner: dict


class SignMap:
    """Recursion tree answering the resolved value of any pair ``(p_index, q_index)``.

    ``zero_p`` / ``zero_q`` hold the elements whose surface is identically
    zero; every pair involving one of them has value 0.
    """

    def __init__(self, root, n_p, n_q, zero_p=(), zero_q=()):
        self.root = root
        self.n_p = n_p
        self.n_q = n_q
        self.zero_p = frozenset(zero_p)
        self.zero_q = frozenset(zero_q)

    def query(self, pi, qi, counter=None):
        if not (0 <= pi < self.n_p and 0 <= qi < self.n_q):
            raise IndexOutOfRange(f"pair ({pi}, {qi}) outside {self.n_p} x {self.n_q}")
        if pi in self.zero_p or qi in self.zero_q:
            return 0
        node = self.root
        while True:
            if counter is not None:
                counter.lookup()
            if isinstance(node, Leaf):
                return node.table[(pi, qi)]
            mine, other = (pi, qi) if node.side == PRIMAL else (qi, pi)
            cell = node.cells[node.owner[mine]]
            if other in cell.constants:
                return cell.constants[other]
            node = cell.child

    def __call__(self, pi, qi):
        return self.query(pi, qi)

    def resolved(self):
        """Yield ``(p_index, q_index, value)`` once for every pair the tree resolves."""
        for pi in sorted(self.zero_p):
            for qi in range(self.n_q):
                yield pi, qi, 0
        for qi in sorted(self.zero_q):
            for pi in range(self.n_p):
                if pi not in self.zero_p:
                    yield pi, qi, 0
        stack = [self.root] if self.root is not None else []
        while stack:
            node = stack.pop()
            if isinstance(node, Leaf):
                for (pi, qi), v in node.table.items():
                    yield pi, qi, v
                continue
            for cell in node.cells:
                for mine in cell.members:
                    for other, v in cell.constants.items():
                        yield (mine, other, v) if node.side == PRIMAL else (other, mine, v)
                if cell.child is not None:
                    stack.append(cell.child)

    def depth(self):
        def walk(node):
            if node is None or isinstance(node, Leaf):
                return 0
            return 1 + max((walk(c.child) for c in node.cells), default=0)

        return walk(self.root)


PredicateTable = SignMap


@dataclass
class IncidenceReport:
    decision: bool
    witness: tuple = None
    sign_map: SignMap = None
    counters: SignTestCounter = field(default_factory=SignTestCounter)


class _Found(Exception):
    def __init__(self, pair):
        super().__init__(pair)
        self.pair = pair


class _Recursion:
    """Shared recursion; subclasses decide crossing, constants and pair values."""

    def __init__(self, points, config, counter):
        self.points = points
        self.config = config
        self.counter = counter

    def crossing_value(self, other, j, cell):
        """Constant value of element ``j`` of side ``other`` on ``cell``, or None if crossed."""
        raise NotImplementedError

    def pair_value(self, pi, qi):
        raise NotImplementedError

    def hit(self, value):
        return False

    def run(self, members):
        cfg = self.config
        if not members[PRIMAL] or not members[DUAL]:
            return Leaf()
        if min(len(members[PRIMAL]), len(members[DUAL])) <= cfg.n0:
            return self.leaf(members)
        if cfg.allow_dual_switch and len(members[DUAL]) > len(members[PRIMAL]):
            side = DUAL
        else:
            side = PRIMAL
        other = 1 - side
        scheme = partition_points(self.points[side], members[side], cfg.r)
        if len(scheme.cells) < 2:
            return self.leaf(members)
        node = Split(side, [], {})
        for pos, cell in enumerate(scheme.cells):
            constants = {}
            crossing = []
            for j in members[other]:
                self.counter.sign()
                v = self.crossing_value(other, j, cell)
                if v is None:
                    crossing.append(j)
                else:
                    constants[j] = v
            entry = CellEntry(cell.box, cell.members, constants)
            node.cells.append(entry)
            for i in cell.members:
                node.owner[i] = pos
            sub = [None, None]
            sub[side] = list(cell.members)
            sub[other] = crossing
            entry.child = self.run(sub) if crossing else None
        return node

    def leaf(self, members):
        table = {}
        for qi in members[DUAL]:
            for pi in members[PRIMAL]:
                self.counter.sign()
                v = self.pair_value(pi, qi)
                table[(pi, qi)] = v
                if self.hit(v) and self.config.stop_at_first:
                    raise _Found((pi, qi))
        return Leaf(table)


class _Detect(_Recursion):
    def __init__(self, query, config, counter):
        super().__init__([query.P, query.Q], config, counter)
        F, t, s = query.F, query.t, query.s
        self.sigma = {}
        self.tau = {}
        self.zero_q = []
        self.zero_p = []
        for qi, q in enumerate(query.Q):
            counter.event("substitutions")
            counter.sign()
            S = F.substitute({t + a: q[a] for a in range(s)}, drop=True)
            if S.is_zero():
                self.zero_q.append(qi)
            self.sigma[qi] = compile_terms(S)
        for pi, p in enumerate(query.P):
            counter.event("substitutions")
            counter.sign()
            T = F.substitute({a: p[a] for a in range(t)}, drop=True)
            if T.is_zero():
                self.zero_p.append(pi)
            self.tau[pi] = compile_terms(T)

    def crossing_value(self, other, j, cell):
        terms = self.sigma[j] if other == DUAL else self.tau[j]
        v = box_sign(terms, cell.box)
        if v is not None:
            return v
        if self.config.refine and not box_may_vanish(terms, cell.box, self.config.refine):
            rep = self.points[1 - other][cell.members[0]]
            self.counter.sign()
            return _sgn(eval_terms(terms, rep))
        return None

    def pair_value(self, pi, qi):
        return _sgn(eval_terms(self.sigma[qi], self.points[PRIMAL][pi]))

    def hit(self, value):
        return value == 0


def detect(query, config=None, counter=None):
    """Decide whether ``F(p, q) = 0`` for some ``p`` in ``P`` and ``q`` in ``Q``."""
    config = config or EngineConfig()
    counter = counter if counter is not None else SignTestCounter()
    n_p, n_q = len(query.P), len(query.Q)
    if not n_p or not n_q:
        return IncidenceReport(False, None, SignMap(Leaf(), n_p, n_q), counter)
    rec = _Detect(query, config, counter)
    zero_p, zero_q = set(rec.zero_p), set(rec.zero_q)
    if zero_q or zero_p:
        pair = (0, min(zero_q)) if zero_q else (min(zero_p), 0)
        if config.stop_at_first:
            return IncidenceReport(True, pair, None, counter)
    members = [
        [i for i in range(n_p) if i not in zero_p],
        [j for j in range(n_q) if j not in zero_q],
    ]
    try:
        root = rec.run(members)
    except _Found as found:
        return IncidenceReport(True, found.pair, None, counter)
    sign_map = SignMap(root, n_p, n_q, zero_p, zero_q)
    witness = None
    if zero_q or zero_p:
        witness = (0, min(zero_q)) if zero_q else (min(zero_p), 0)
    else:
        zeros = sorted((pi, qi) for pi, qi, v in sign_map.resolved() if v == 0)
        witness = zeros[0] if zeros else None
    return IncidenceReport(witness is not None, witness, sign_map, counter)


def sign_query(sign_map, p_index, q_index, counter=None):
    """Sign of ``F(p, q)`` read from a sign map built with ``stop_at_first=False``."""
    return sign_map.query(p_index, q_index, counter)


class _Batch(_Recursion):
    def __init__(self, points, params, factors, membership, config, counter):
        super().__init__([points, params], config, counter)
        self.membership = membership
        t = len(points[0])
        s = len(params[0])
        self.by_param = {}
        self.by_point = {}
        if factors is None:
            return
        for j, d in enumerate(params):
            self.by_param[j] = [
                compile_terms(B.substitute({t + a: d[a] for a in range(s)}, drop=True)) for B in factors
            ]
        for i, x in enumerate(points):
            self.by_point[i] = [
                compile_terms(B.substitute({a: x[a] for a in range(t)}, drop=True)) for B in factors
            ]

    def crossing_value(self, other, j, cell):
        if not self.by_param:
            return None
        terms = self.by_param[j] if other == DUAL else self.by_point[j]
        for f in terms:
            if box_sign(f, cell.box) is None:
                return None
        rep = cell.members[0]
        self.counter.event("membership")
        if other == DUAL:
            return self.membership(rep, j)
        return self.membership(j, rep)

    def pair_value(self, pi, qi):
        self.counter.event("membership")
        return self.membership(pi, qi)


def batch_predicates(points, params, boundary, membership, config=None, counter=None):
    """Table of ``membership(point_index, param_index)`` for every pair.

    ``membership`` may change value only across the zero set of
    ``boundary``, given as a polynomial of arity ``t + s`` or a list of
    factors whose product is the boundary (``None`` disables the filter).
    A box avoiding the boundary for a parameter is answered by one
    membership call at a point of the box.
    """
    config = config or EngineConfig(stop_at_first=False)
    counter = counter if counter is not None else SignTestCounter()
    points = [tuple(mpq(x) for x in p) for p in points]
    params = [tuple(mpq(x) for x in d) for d in params]
    if not points or not params:
        return SignMap(Leaf(), len(points), len(params))
    if boundary is None:
        factors = None
    else:
        factors = [boundary] if isinstance(boundary, MultiPoly) else list(boundary)
        t, s = len(points[0]), len(params[0])
        for B in factors:
            if B.arity != t + s:
                raise ArityMismatch(f"boundary arity {B.arity}, expected {t + s}")
    rec = _Batch(points, params, factors, membership, config, counter)
    root = rec.run([list(range(len(points))), list(range(len(params)))])
    return SignMap(root, len(points), len(params))


def main_term_exponents(t, s):
    """Exponents of ``M`` and ``N`` in the main term for surfaces in R^t and points in R^s."""
    if t < 1 or s < 1:
        raise DegenerateDimensions("t and s must be positive")
    if t * s == 1:
        raise DegenerateDimensions("t * s = 1 gives no main term")
    d = t * s - 1
    return 1 - Fraction(t - 1, d), 1 - Fraction(s - 1, d)


def brute_pairs(query):
    """All-pairs exact oracle: sorted list of ``(p_index, q_index)`` with ``F(p, q) = 0``."""
    out = []
    for pi, p in enumerate(query.P):
        for qi, q in enumerate(query.Q):
            if query.F.evaluate(p + q) == 0:
                out.append((pi, qi))
    return out
