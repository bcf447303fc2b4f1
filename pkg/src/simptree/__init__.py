"""Facet ideals of simplicial forests and path ideals of rooted trees:
linear resolutions of powers, regularity formulas and an exact Betti oracle."""

__version__ = "0.1.0"
