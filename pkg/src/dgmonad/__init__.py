"""Exact computations with finitely presented DG categories and DG monads."""

__version__ = "0.1.0"
