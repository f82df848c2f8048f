"""Resonant filter-bank engine steered by 2-D position via simplicial interpolation."""

__version__ = "0.1.0"
