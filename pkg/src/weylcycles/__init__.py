"""Weyl cycles on blow-ups of projective space at general points."""

__version__ = "0.1.0"
