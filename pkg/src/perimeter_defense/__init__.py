"""Perimeter defense reach-avoid games on convex shapes."""

__version__ = "0.1.0"
