"""Variational toolkit for superpositions of fractional p-Laplacians.

The operator under study integrates fractional p-Laplacians of every order
s in [0, 1] against a signed measure whose positive high-order part
dominates.  The package discretizes it on uniform grids with zero exterior
condition, computes principal eigenvalues, Sobolev constants and
mountain-pass critical points of the critical-exponent energy, and ships a
scan harness for the functional inequalities the construction relies on.
"""

from .backend import backend_name
from .grid import Domain
from .measure import MeasureAtom, SpectralMeasure, ValidatedMeasure, validate
from .operators import Problem

__all__ = [
    "backend_name",
    "Domain",
    "MeasureAtom",
    "SpectralMeasure",
    "ValidatedMeasure",
    "validate",
    "Problem",
]

__version__ = "0.1.0"
