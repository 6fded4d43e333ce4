"""Discrete Morse matchings, collapses and certificates for geometric
simplicial/cubical complexes."""

__version__ = "0.1.0"
