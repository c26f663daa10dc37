"""Poles of real zeta functions of weighted homogeneous plane curves."""

__version__ = "0.1.0"

from .bsroots import CandidateRoot, full_bs_roots, milnor_number, window_roots
from .chainrule import cijk_table
from .polecriterion import PoleVerdict, Status, classify_root, symmetry_class, vanishes_by_symmetry
from .polyring import Poly, Weights, infer_weights, parse_poly, validate_isolated_singularity
from .quadrature import IntegralResult, Tolerances, singular_integral

__all__ = [
    "CandidateRoot",
    "IntegralResult",
    "Poly",
    "PoleVerdict",
    "Status",
    "Tolerances",
    "Weights",
    "cijk_table",
    "classify_root",
    "full_bs_roots",
    "infer_weights",
    "milnor_number",
    "parse_poly",
    "singular_integral",
    "symmetry_class",
    "validate_isolated_singularity",
    "vanishes_by_symmetry",
    "window_roots",
]
