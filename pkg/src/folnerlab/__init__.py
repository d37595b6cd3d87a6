"""Finite-window laboratory for amenability of bounded-geometry spaces and
their uniform Roe algebras."""

__version__ = "0.1.0"
