"""Exact finite computations with Kan extensions, reflective hulls and fibrewise spaces."""

__version__ = "0.1.0"
