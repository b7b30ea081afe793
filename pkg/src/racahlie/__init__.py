"""Exact Racah algebra for the double tensors of an open d shell."""
from .radix import RadicalNumber, sqrt_rational
from .wigner import HalfInt, cg, racah_w, six_j

__version__ = "0.1.0"

__all__ = ["HalfInt", "RadicalNumber", "cg", "racah_w", "six_j", "sqrt_rational"]
