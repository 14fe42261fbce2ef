"""Exact computations with systems of objects in bounded derived categories of quiver algebras."""

__version__ = "0.1.0"
