"""Exact tensor calculus for almost contact B-metric Lie algebras."""

from .scalar import Poly, parse_poly
from .tensor import CO, CONTRA, Tensor
from .manifold import AlgebraModel, Connection, levi_civita
from .example import ExampleParams, build_example, verify_paper_claims

__all__ = [
    "CO", "CONTRA", "AlgebraModel", "Connection", "ExampleParams", "Poly",
    "Tensor", "build_example", "levi_civita", "parse_poly", "verify_paper_claims",
]
__version__ = "0.1.0"
