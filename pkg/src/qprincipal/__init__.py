"""Quantum principal bundles over quantum projective space via rewriting."""
from .coeff import DomainError, LaurentPoly, ParamSet, StructuralError
from .ncalg import (InvalidHopfIdeal, NCPoly, Presentation, RewriteError,
                    UnsupportedLocalization, adjoin_inverse, cdv, check_confluence,
                    gl2_multi, gln_multi, preset, quotient, sudbery, tensor)
from .hopf import HopfStructure, quantum_determinant, standard_hopf
from .sheaf import SheafModel, build_bundle_sheaf, build_projective_sheaf, qpb_check
from .reduction import build_reduction_data, construct_reduced_sheaf
from .dsl import ParseError, parse_expr, parse_presentation, print_expr, print_presentation

__version__ = "0.1.0"

__all__ = [
    "DomainError", "LaurentPoly", "ParamSet", "StructuralError",
    "InvalidHopfIdeal", "NCPoly", "Presentation", "RewriteError", "UnsupportedLocalization",
    "adjoin_inverse", "cdv", "check_confluence", "gl2_multi", "gln_multi", "preset", "quotient",
    "sudbery", "tensor",
    "HopfStructure", "quantum_determinant", "standard_hopf",
    "SheafModel", "build_bundle_sheaf", "build_projective_sheaf", "qpb_check",
    "build_reduction_data", "construct_reduced_sheaf",
    "ParseError", "parse_expr", "parse_presentation", "print_expr", "print_presentation",
]
