"""Spectral Galerkin solver for critical points of strongly indefinite functionals."""

__version__ = "0.1.0"
