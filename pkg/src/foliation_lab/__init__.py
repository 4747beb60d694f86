"""Exact computations with holomorphic foliations of the complex projective plane."""

__version__ = "0.1.0"
