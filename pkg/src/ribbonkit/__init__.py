"""Knot Floer homology of grid diagrams, branched-cover generator counts,
Perron-Frobenius dilatations, certified inequality calculators and a
screening engine for ribbon concordance."""

__version__ = "0.1.0"
