"""Exact chain complexes: Chevalley-Eilenberg, Čech-type, and the model double complex."""
from .cech import FIXTURE_NERVES, CechComplex, CoefficientSystem, Nerve, cech_complex
from .complex import ChainComplex, cohomology_ranks
from .double import DoubleComplex, coboundary_matrix, double_complex
from .lie import LieAlgebra, abelian, ce_complex, heisenberg, sl2

__all__ = [
    "ChainComplex",
    "cohomology_ranks",
    "LieAlgebra",
    "ce_complex",
    "abelian",
    "sl2",
    "heisenberg",
    "Nerve",
    "CoefficientSystem",
    "CechComplex",
    "cech_complex",
    "FIXTURE_NERVES",
    "DoubleComplex",
    "coboundary_matrix",
    "double_complex",
]
