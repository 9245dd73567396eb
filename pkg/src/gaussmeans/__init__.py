"""Exact Gaussian-ensemble means, one-backbone tables and discrete moduli volumes."""

__version__ = "0.1.0"
