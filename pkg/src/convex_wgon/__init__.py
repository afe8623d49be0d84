"""Optimal convex w-gons over planar point sets."""

__version__ = "0.1.0"
