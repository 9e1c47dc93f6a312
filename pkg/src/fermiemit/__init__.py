"""Collective emission of magnetic dipoles into a two-dimensional electron gas."""

__version__ = "0.1.0"
