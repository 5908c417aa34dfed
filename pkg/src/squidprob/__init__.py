"""Probability tools for the glass bridge and Warships challenges."""

__version__ = "0.1.0"
