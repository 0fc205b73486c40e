"""Exact cutting-plane convexification of midpoint-convex integer
functions, the mixing-set correspondence, joint epigraphs, and the
mixed-integer extension with continuous slacks.

All arithmetic is exact rational; every fast path ships with an
independent brute-force oracle.
"""

from .core import (
    DiscreteBox,
    LinearInequality,
    Permutation,
    Rational,
    canonicalize,
    enumerate_lattice,
    rat,
    rat_str,
    unit_hypercube,
)
from .fnzoo import FunctionOracle

__all__ = [
    "DiscreteBox",
    "FunctionOracle",
    "LinearInequality",
    "Permutation",
    "Rational",
    "canonicalize",
    "enumerate_lattice",
    "rat",
    "rat_str",
    "unit_hypercube",
]

__version__ = "0.1.0"
