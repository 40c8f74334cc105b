"""LU(3,q) LDPC codes from the symplectic generalized quadrangle W(q)."""

from .fq import FieldElement, FieldSpec, make_field
from .geometry import Quadrangle, build_quadrangle, quadrangle
from .gf2 import BitMatrix, rank

__all__ = ["BitMatrix", "FieldElement", "FieldSpec", "Quadrangle", "build_quadrangle", "make_field", "quadrangle", "rank"]
__version__ = "0.1.0"
