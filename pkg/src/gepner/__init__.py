"""Exact computations for the Gepner statistic on permutations and words."""

__version__ = "0.1.0"
