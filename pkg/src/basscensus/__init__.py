"""Counting supersingular abelian surfaces through local lattice censuses."""

__version__ = "0.1.0"
