"""Computational toolkit for Heilbronn's subgroup of Z/p^2 and its exponential sums."""

__version__ = "0.1.0"
