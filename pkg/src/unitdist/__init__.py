"""Exact unit-distance graph construction and optimal weighted independence ratios."""

__version__ = "0.1.0"
