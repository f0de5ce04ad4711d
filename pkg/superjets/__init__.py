"""Exact symbolic computations with dg manifolds, L-infinity algebras and jets of simplicial objects."""

__version__ = "0.1.0"
