"""Conservative interval enclosures with exact rational endpoints.

These are filters only: a result that excludes zero proves the polynomial has
no zero in the box, a result containing zero proves nothing.
"""

from dataclasses import dataclass

from kpol.algebra.rat import Rat, rat
from kpol.exceptions import ArityMismatch


@dataclass(frozen=True)
class RatInterval:
    lo: Rat
    hi: Rat

    def __post_init__(self):
        object.__setattr__(self, "lo", rat(self.lo))
        object.__setattr__(self, "hi", rat(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    def contains(self, x):
        return self.lo <= x <= self.hi

    def contains_zero(self):
        return self.lo <= 0 <= self.hi

    @property
    def width(self):
        return self.hi - self.lo

    def split(self):
        mid = (self.lo + self.hi) / 2
        return RatInterval(self.lo, mid), RatInterval(mid, self.hi)


def _pow_bounds(lo, hi, e):
    if e == 0:
        return 1, 1
    a, b = lo**e, hi**e
    if e % 2 == 1:
        return a, b
    if lo >= 0:
        return a, b
    if hi <= 0:
        return b, a
    return 0, max(a, b)


def interval_eval_bounds(terms, bounds):
    """Enclosure ``(lo, hi)`` for a compiled term list over ``bounds``.

    ``terms`` is an iterable of ``(exponents, coefficient)``; ``bounds`` is a
    sequence of ``(lo, hi)`` pairs.  Term-wise evaluation: each monomial's
    exact range on the box is computed, then the ranges are summed.
    """
    total_lo = total_hi = 0
    cache = {}
    for exps, c in terms:
        mlo = None
        for i, e in enumerate(exps):
            if not e:
                continue
            key = (i, e)
            pb = cache.get(key)
            if pb is None:
                lo, hi = bounds[i]
                pb = cache[key] = _pow_bounds(lo, hi, e)
            if mlo is None:
                mlo, mhi = pb
                continue
            a, b = pb
            cands = (mlo * a, mlo * b, mhi * a, mhi * b)
            mlo, mhi = min(cands), max(cands)
        if mlo is None:
            mlo = mhi = 1
        if c > 0:
            total_lo += c * mlo
            total_hi += c * mhi
        else:
            total_lo += c * mhi
            total_hi += c * mlo
    return total_lo, total_hi


def interval_eval(F, box):
    """Interval guaranteed to contain ``{F(x) : x in box}``."""
    if len(box) != F.arity:
        raise ArityMismatch(f"box of dimension {len(box)} for arity {F.arity}")
    bounds = [(iv.lo, iv.hi) if isinstance(iv, RatInterval) else (rat(iv[0]), rat(iv[1])) for iv in box]
    lo, hi = interval_eval_bounds(F._compile(), bounds)
    return RatInterval(lo, hi)


def may_vanish(F, bounds, refine=1):
    """Conservative test whether ``F`` can vanish on the box ``bounds``.

    Returns False only when the enclosure (after ``refine`` levels of
    bisection along the widest axis) excludes zero everywhere.
    """
    terms = F._compile()
    lo, hi = interval_eval_bounds(terms, bounds)
    if lo > 0 or hi < 0:
        return False
    if refine <= 0:
        return True
    widths = [b[1] - b[0] for b in bounds]
    axis = max(range(len(bounds)), key=lambda i: widths[i]) if bounds else 0
    if not bounds or widths[axis] == 0:
        return True
    a, b = bounds[axis]
    mid = (a + b) / 2
    left = list(bounds)
    right = list(bounds)
    left[axis] = (a, mid)
    right[axis] = (mid, b)
    return may_vanish(F, left, refine - 1) or may_vanish(F, right, refine - 1)
