"""Exact tattoo numbers, brush numbers and colour-blend simulation on small graphs."""

__version__ = "0.1.0"
