"""Exact computation with Hasse-Schmidt derivations over polynomial rings in
positive characteristic."""

__version__ = "0.1.0"
