"""Exact 2-loop diagram calculus: theta spaces, Gaussian integration and φ_n."""

from .laurent import LaurentPoly, parse, format_poly
from .theta import ThetaElement, canonical_pair, from_theta, reduce_dumbbell
from .rozansky import MonomialMatrix, phi

__all__ = [
    "LaurentPoly", "parse", "format_poly",
    "ThetaElement", "canonical_pair", "from_theta", "reduce_dumbbell",
    "MonomialMatrix", "phi",
]
__version__ = "0.1.0"
