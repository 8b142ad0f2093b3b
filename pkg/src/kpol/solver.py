"""k-POL by incidence detection between two product point sets."""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from kpol.baselines import found, not_found
from kpol.counters import SignTestCounter
from kpol.exceptions import KTooSmall
from kpol.hopcroft import EngineConfig, IncidenceQuery, detect


@dataclass(frozen=True)
class DimSplit:
    t: int
    s: int

    def __post_init__(self):
        if not 1 <= self.t <= self.s:
            raise KTooSmall(f"invalid split ({self.t}, {self.s})")


def split_dims(k):
    """``(k/2, k/2)`` for even ``k``, ``((k-1)/2, (k+1)/2)`` for odd ``k``."""
    if k < 3:
        raise KTooSmall(f"k = {k} < 3")
    return DimSplit(k // 2, k - k // 2)


def kpol_exponent(k):
    """Exponent ``k - 2 + (k - 2)/(st - 1)`` of the main term, as an exact fraction."""
    d = split_dims(k)
    return Fraction(k - 2) + Fraction(k - 2, d.t * d.s - 1)


def solve(instance, config=None):
    """Decide the instance by detecting an incidence between ``A_1 x .. x A_t`` and the rest."""
    split = split_dims(instance.k)
    t = split.t
    counter = SignTestCounter()
    if instance.is_empty():
        return not_found(counter, "kpol")
    axes = [instance.distinct(i) for i in range(instance.k)]
    P = list(product(*axes[:t]))
    Q = list(product(*axes[t:]))
    counter.event("materialized_points", len(P) + len(Q))
    report = detect(IncidenceQuery(t, split.s, instance.F, P, Q), config or EngineConfig(), counter)
    if not report.decision:
        return not_found(counter, "kpol")
    pi, qi = report.witness
    return found(instance, P[pi] + Q[qi], counter, "kpol")
