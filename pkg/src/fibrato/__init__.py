"""Finite base-structured categories: completions, hierarchies, 2-groups and geometries."""

__version__ = "0.1.0"
