"""Exact toolkit for polynomial loops in SL2 over commutative rings."""

__version__ = "0.1.0"
