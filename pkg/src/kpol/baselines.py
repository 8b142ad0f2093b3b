"""Reference solvers: brute force, the naive root-search algorithm and meet in the middle."""

from bisect import bisect_left
from dataclasses import dataclass, field
from itertools import product

from gmpy2 import mpq

from kpol.algebra import upoly
from kpol.algebra.roots import EQ, GT, isolate_real_roots
from kpol.counters import SignTestCounter
from kpol.exceptions import KTooSmall, NotPlainSum, SplitMismatch
from kpol.instance import Witness

YES = "YES"
NO = "NO"


@dataclass
class SolveResult:
    decision: str
    witness: Witness = None
    counters: SignTestCounter = field(default_factory=SignTestCounter)
    solver: str = ""
    wall_ms: float = 0.0

    def __post_init__(self):
        if (self.decision == YES) != (self.witness is not None):
            raise ValueError("a YES decision needs a witness and a NO decision must not have one")

    def __bool__(self):
        return self.decision == YES

    def row(self):
        return {
            "solver": self.solver,
            "decision": self.decision,
            "witness": self.witness.as_text() if self.witness else "",
            **{k: v for k, v in self.counters.snapshot().items() if k in ("sign_tests", "lookups", "ram_ops")},
        }


def make_witness(instance, values):
    values = tuple(mpq(v) for v in values)
    indices = tuple(bisect_left(s, v) for s, v in zip(instance.sets, values))
    return Witness(values, indices)


def found(instance, values, counter, solver):
    return SolveResult(YES, make_witness(instance, values), counter, solver)


def not_found(counter, solver):
    return SolveResult(NO, None, counter, solver)


def brute_force(instance):
    """Evaluate ``F`` on every tuple of distinct values, in lexicographic order."""
    counter = SignTestCounter()
    axes = [instance.distinct(i) for i in range(instance.k)]
    F = instance.F
    for point in product(*axes):
        counter.sign()
        if F.evaluate(point) == 0:
            return found(instance, point, counter, "brute")
    return not_found(counter, "brute")


def search_sorted(values, root, counter):
    """Index of ``root`` in the sorted rationals ``values``, or None.

    Binary search with exact comparisons against the algebraic number; each
    comparison is one sign test.
    """
    lo, hi = 0, len(values)
    while lo < hi:
        mid = (lo + hi) // 2
        counter.sign()
        c = root.cmp_rational(values[mid])
        if c == EQ:
            return mid
        if c == GT:
            lo = mid + 1
        else:
            hi = mid
    return None


def naive_solve(instance):
    """Substitute each (k-1)-tuple, isolate the roots in ``x_k`` and search ``A_k``."""
    if instance.k < 2:
        raise KTooSmall("k must be at least 2")
    counter = SignTestCounter()
    if instance.is_empty():
        return not_found(counter, "naive")
    axes = [instance.distinct(i) for i in range(instance.k)]
    last = axes[-1]
    coeffs = instance.F.coefficients_in(instance.k - 1)
    for prefix in product(*axes[:-1]):
        counter.event("substitutions")
        point = list(prefix) + [mpq(0)]
        p = upoly.trim([c.evaluate(point) for c in coeffs])
        if not p:
            return found(instance, list(prefix) + [last[0]], counter, "naive")
        if len(p) == 1:
            continue
        for root in isolate_real_roots(p):
            idx = search_sorted(last, root, counter)
            if idx is not None:
                counter.sign()
                if instance.F.evaluate(list(prefix) + [last[idx]]) == 0:
                    return found(instance, list(prefix) + [last[idx]], counter, "naive")
    return not_found(counter, "naive")


def is_plain_sum(F):
    k = F.arity
    expected = {tuple(1 if j == i else 0 for j in range(k)): mpq(1) for i in range(k)}
    return F.terms == expected


def _partial_sums(axes, counter):
    """Map each sum over ``axes`` to the lexicographically first tuple producing it."""
    out = {}
    for tup in product(*axes):
        counter.event("partial_sums")
        s = sum(tup, mpq(0))
        if s not in out:
            out[s] = tup
    return out


def _two_pointer(left, right, target, counter):
    """Find ``l + r = target`` with ``left``, ``right`` sorted ascending."""
    i, j = 0, len(right) - 1
    while i < len(left) and j >= 0:
        counter.sign()
        s = left[i] + right[j] - target
        if s == 0:
            return left[i], right[j]
        if s < 0:
            i += 1
        else:
            j -= 1
    return None


def mitm_ksum(instance):
    """Meet in the middle for ``x1 + ... + xk = 0``."""
    if not is_plain_sum(instance.F):
        raise NotPlainSum("F is not x1 + ... + xk")
    counter = SignTestCounter()
    if instance.is_empty():
        return not_found(counter, "mitm")
    k = instance.k
    axes = [instance.distinct(i) for i in range(k)]
    half = k // 2
    if k % 2 == 0:
        lsums = _partial_sums(axes[:half], counter)
        rsums = _partial_sums(axes[half:], counter)
        left, right = sorted(lsums), sorted(rsums)
        hit = _two_pointer(left, right, mpq(0), counter)
        if hit:
            return found(instance, lsums[hit[0]] + rsums[hit[1]], counter, "mitm")
        return not_found(counter, "mitm")
    lsums = _partial_sums(axes[:half], counter)
    rsums = _partial_sums(axes[half + 1:], counter)
    left, right = sorted(lsums), sorted(rsums)
    for x in axes[half]:
        hit = _two_pointer(left, right, -x, counter)
        if hit:
            return found(instance, lsums[hit[0]] + (x,) + rsums[hit[1]], counter, "mitm")
    return not_found(counter, "mitm")


def _embed(P, k, offset):
    if P.arity == k:
        return P
    return P.extend(k, list(range(offset, offset + P.arity)))


def mitm_separable(instance, split):
    """Meet in the middle for ``F = G(F1(x1..xt), F2(x_{t+1}..xk))``."""
    F1, F2, G = split
    k = instance.k
    if G.arity != 2:
        raise SplitMismatch("G must be bivariate")
    t = F1.arity if F1.arity < k else max([i + 1 for i in F1.used_variables()] or [0])
    E1 = _embed(F1, k, 0)
    E2 = _embed(F2, k, t)
    if any(i >= t for i in E1.used_variables()) or any(i < t for i in E2.used_variables()):
        raise SplitMismatch("F1 and F2 must use disjoint variable blocks")
    if G.compose([E1, E2]) != instance.F:
        raise SplitMismatch("G(F1, F2) differs from F")
    counter = SignTestCounter()
    if instance.is_empty():
        return not_found(counter, "separable")
    axes = [instance.distinct(i) for i in range(k)]
    pad_right = [mpq(0)] * (k - t)
    pad_left = [mpq(0)] * t
    uvals = {}
    for tup in product(*axes[:t]):
        counter.event("partial_sums")
        u = E1.evaluate(list(tup) + pad_right)
        uvals.setdefault(u, tup)
    us = sorted(uvals)
    gcoef = G.coefficients_in(0)
    seen = set()
    for tup in product(*axes[t:]):
        counter.event("partial_sums")
        v = E2.evaluate(pad_left + list(tup))
        if v in seen:
            continue
        seen.add(v)
        p = upoly.trim([c.evaluate([mpq(0), v]) for c in gcoef])
        if not p:
            return found(instance, uvals[us[0]] + tup, counter, "separable")
        if len(p) == 1:
            continue
        for root in isolate_real_roots(p):
            idx = search_sorted(us, root, counter)
            if idx is not None:
                return found(instance, uvals[us[idx]] + tup, counter, "separable")
    return not_found(counter, "separable")


__all__ = [
    "NO",
    "YES",
    "SolveResult",
    "brute_force",
    "is_plain_sum",
    "make_witness",
    "mitm_ksum",
    "mitm_separable",
    "naive_solve",
    "search_sorted",
]
