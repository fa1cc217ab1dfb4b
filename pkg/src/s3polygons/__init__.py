"""Polygons in the 3-sphere as quasi-Hamiltonian quotients of SU(2) tuples."""

from . import bending, braid, charvar, moduli, quasipoisson, su2
from .errors import PolygonError
from .moduli import HolonomyTuple, TangentVector, solve_closure

__version__ = "0.1.0"
