"""Exact computations with order- and orientation-preserving transformations."""

__version__ = "0.1.0"
