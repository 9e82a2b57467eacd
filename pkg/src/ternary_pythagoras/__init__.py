"""Computations behind sum-of-squares length bounds for ternary forms."""

__version__ = "0.1.0"
