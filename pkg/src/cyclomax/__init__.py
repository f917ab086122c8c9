"""Exact computation of maximal heights of divisors of x**n - 1."""

__version__ = "0.1.0"
