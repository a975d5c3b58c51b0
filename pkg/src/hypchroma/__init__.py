"""Chromatic-number machinery for the hyperbolic plane and regular trees."""

from . import bounds, checkerboard, chromasolve, flatmodel, heptile, hypgeom, treegeom

__all__ = [
    "bounds",
    "checkerboard",
    "chromasolve",
    "flatmodel",
    "heptile",
    "hypgeom",
    "treegeom",
]

__version__ = "0.1.0"
