"""Exact Hochschild and simplicial cochain computations for based algebras."""

__version__ = "0.1.0"
