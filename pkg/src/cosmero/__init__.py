"""Exact Eisenstein series, elliptic expansion functions, necklace sums and
cochain complexes over Q."""

__version__ = "0.1.0"
