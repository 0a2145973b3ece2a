"""Exact computations with Lie powers, Chevalley-Eilenberg complexes and simplicial modules."""

__version__ = "0.1.0"
