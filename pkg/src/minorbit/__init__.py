"""Verification workbench for graded matrix models of conformal groups,
minimal-orbit measures, and Bessel-type spherical vectors."""

from . import bessel, catalog, liealg, orbit, ratlin, reports, sphver, tensor

__all__ = ["bessel", "catalog", "liealg", "orbit", "ratlin", "reports",
           "sphver", "tensor"]

__version__ = "0.1.0"
