"""Stabilizer Bell operators, local bounds and maximally nonlocal subspaces."""

__version__ = "0.1.0"
