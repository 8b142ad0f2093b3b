"""scikit-learn style wrappers around the solvers.

Each estimator takes a list of instances as ``X``.  ``fit`` solves them and
keeps the results; ``predict`` solves and returns one boolean per instance
(True for YES).  Solving learns nothing, so ``fit`` only records results.
"""

import time

import numpy as np
from sklearn.base import BaseEstimator

from kpol.adt import FREDMAN, AdtConfig, solve_4pol, solve_5pol
from kpol.algebra.poly import MultiPoly
from kpol.baselines import brute_force, mitm_ksum, mitm_separable, naive_solve
from kpol.exceptions import SplitMismatch, UnknownSolver
from kpol.hopcroft import EngineConfig
from kpol.solver import solve as kpol_solve
from kpol.validation import check_instances, check_is_fitted

SOLVER_NAMES = ("brute", "naive", "mitm", "separable", "kpol", "adt4", "adt5")


def additive_split(F, t=None):
    """Split ``F = F1(x1..xt) + F2(x_{t+1}..xk)`` when no term mixes the two blocks."""
    k = F.arity
    t = k // 2 if t is None else t
    left, right = {}, {}
    for e, c in F.terms.items():
        if any(e[:t]) and any(e[t:]):
            raise SplitMismatch(f"term {e} mixes both variable blocks")
        if any(e[t:]):
            right[e[t:]] = c
        else:
            left[e[:t]] = c
    F1 = MultiPoly(t, left)
    F2 = MultiPoly(k - t, right)
    G = MultiPoly(2, {(1, 0): 1, (0, 1): 1})
    return F1, F2, G


def run_solver(name, instance, g=None, mode=FREDMAN, r=8, n0=64):
    """Run a named solver and record its wall time; raises UnknownSolver for unknown names."""
    start = time.perf_counter()
    res = _dispatch(name, instance, g, mode, r, n0)
    res.wall_ms = (time.perf_counter() - start) * 1000.0
    return res


def _dispatch(name, instance, g, mode, r, n0):
    if name == "brute":
        return brute_force(instance)
    if name == "naive":
        return naive_solve(instance)
    if name == "mitm":
        return mitm_ksum(instance)
    if name == "separable":
        return mitm_separable(instance, additive_split(instance.F))
    if name == "kpol":
        return kpol_solve(instance, EngineConfig(r=r, n0=n0))
    if name in ("adt4", "adt5"):
        config = AdtConfig(g=g, mode=mode, engine=EngineConfig(r=r, n0=n0, stop_at_first=False))
        return (solve_4pol if name == "adt4" else solve_5pol)(instance, config)
    raise UnknownSolver(f"unknown solver {name!r}; choose from {', '.join(SOLVER_NAMES)}")


class KPolEstimator(BaseEstimator):
    """Decide k-POL instances with the solver named by ``solver``."""

    def __init__(self, solver="brute", g=None, mode=FREDMAN, r=8, n0=64):
        self.solver = solver
        self.g = g
        self.mode = mode
        self.r = r
        self.n0 = n0

    def _solve(self, X):
        return [run_solver(self.solver, inst, self.g, self.mode, self.r, self.n0) for inst in check_instances(X)]

    def fit(self, X, y=None):
        if self.solver not in SOLVER_NAMES:
            raise UnknownSolver(f"unknown solver {self.solver!r}")
        self.results_ = self._solve(X)
        self.decision_ = np.array([bool(r) for r in self.results_])
        self.witness_ = [r.witness for r in self.results_]
        self.counters_ = [r.counters for r in self.results_]
        self.n_instances_ = len(self.results_)
        return self

    def predict(self, X):
        check_is_fitted(self, "results_")
        return np.array([bool(r) for r in self._solve(X)])

    def score(self, X, y):
        """Fraction of instances whose decision matches ``y``."""
        y = np.asarray(y, dtype=bool)
        return float(np.mean(self.predict(X) == y))


class BruteForceSolver(KPolEstimator):
    def __init__(self):
        super().__init__("brute")


class NaiveSolver(KPolEstimator):
    def __init__(self):
        super().__init__("naive")


class MeetInTheMiddleSolver(KPolEstimator):
    """``separable`` false handles plain k-SUM, true any additively split ``F``."""

    def __init__(self, separable=False):
        self.separable = separable
        super().__init__("separable" if separable else "mitm")

    def fit(self, X, y=None):
        self.solver = "separable" if self.separable else "mitm"
        return super().fit(X, y)


class HopcroftSolver(KPolEstimator):
    def __init__(self, r=8, n0=64):
        super().__init__("kpol", r=r, n0=n0)


class ADTSolver(KPolEstimator):
    """Point-location solver; ``k`` (4 or 5) picks the variant."""

    def __init__(self, k=4, g=None, mode=FREDMAN, r=8, n0=64):
        self.k = k
        super().__init__(f"adt{k}", g, mode, r, n0)

    def fit(self, X, y=None):
        self.solver = f"adt{self.k}"
        return super().fit(X, y)
