"""Karush-Kuhn-Tucker points of parametric Motzkin-Straus programs on graphs."""

__version__ = "0.1.0"
