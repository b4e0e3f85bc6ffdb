"""Operator-norm constants for Riesz projections on tori and finite cyclic groups."""

__version__ = "0.1.0"
