"""Knot Floer complexes of cables of dual knots in +1 surgery on mirrored torus knots.

The pipeline builds the filtered mapping cone of a staircase complex,
reduces it, splits off acyclic pieces, and reads invariants and a genus
obstruction off the resulting local representative.
"""

from .algebra import ComplexUV, dualize, tensor, unit_complex
from .cone import build_cone
from .invariants import dual_class, local_class_Cn, phi, standard_params, tau
from .obstruction import genus_bound
from .reduction import pipeline, reduce_filtered, truncate_to
from .staircase import alexander_poly, mirror_staircase, staircase

__all__ = [
    "ComplexUV", "alexander_poly", "build_cone", "dual_class", "dualize", "genus_bound",
    "local_class_Cn", "mirror_staircase", "phi", "pipeline", "reduce_filtered", "staircase",
    "standard_params", "tau", "tensor", "truncate_to", "unit_complex",
]
__version__ = "0.1.0"
