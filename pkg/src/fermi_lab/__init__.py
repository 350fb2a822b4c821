"""Exact CAR algebra, fermionic Wick calculus, and a desk-scale
weak-coupling-limit laboratory: finite-coupling propagator matrix elements
against their quantum-stochastic limit."""

__version__ = "0.1.0"
