"""Algebraic degeneracy testing (k-POL) solvers with sign-test accounting."""

__version__ = "0.1.0"
