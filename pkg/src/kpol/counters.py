"""Decision-tree cost ledger."""

from collections import Counter
from dataclasses import dataclass, field


@dataclass
class SignTestCounter:
    """Counts sign tests of constant-degree polynomials in the input numbers.

    ``phases`` splits ``sign_tests`` by the phase that issued them and
    ``events`` holds named operation tallies (substitutions, partial sums,
    ...).  All fields only ever grow; counters merge by addition.
    """

    sign_tests: int = 0
    lookups: int = 0
    ram_ops: int = 0
    phases: Counter = field(default_factory=Counter)
    events: Counter = field(default_factory=Counter)
    phase: str = "main"

    def sign(self, n=1, phase=None):
        self.sign_tests += n
        self.phases[phase or self.phase] += n

    def lookup(self, n=1):
        self.lookups += n

    def ram(self, n=1):
        self.ram_ops += n

    def event(self, name, n=1):
        self.events[name] += n

    def merge(self, other):
        self.sign_tests += other.sign_tests
        self.lookups += other.lookups
        self.ram_ops += other.ram_ops
        self.phases.update(other.phases)
        self.events.update(other.events)
        return self

    def snapshot(self):
        return {
            "sign_tests": self.sign_tests,
            "lookups": self.lookups,
            "ram_ops": self.ram_ops,
            "phases": dict(self.phases),
            "events": dict(self.events),
        }

    def copy(self):
        out = SignTestCounter(phase=self.phase)
        return out.merge(self)


class phase_scope:
    """Context manager switching the default phase of a counter."""

    def __init__(self, counter, name):
        self.counter = counter
        self.name = name
        self.saved = None

    def __enter__(self):
        self.saved = self.counter.phase
        self.counter.phase = self.name
        return self.counter

    def __exit__(self, *exc):
        self.counter.phase = self.saved
        return False
