"""Cascades, contour filters and a decidable algebra of leaf sets."""

__version__ = "0.1.0"
