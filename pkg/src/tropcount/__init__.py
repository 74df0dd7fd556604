"""Exact enumeration of plane tropical curves with complex, real, and
Welschinger counts derived from lattice indices."""

__version__ = "0.1.0"
