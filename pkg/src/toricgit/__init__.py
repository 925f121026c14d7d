"""Exact-arithmetic geometric invariant theory for subtorus actions on
toric varieties."""

__version__ = "0.1.0"
