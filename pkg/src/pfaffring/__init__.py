"""Weighted polynomial rings, Groebner bases and 6x6 Pfaffian formats for
surfaces with p_g = 4, K^2 = 6 and their Weierstrass curve sections."""

from .polyring import QQ, GF32003, FieldSpec, Polynomial, WeightedRing
from .groebner import Ideal, MonomialOrder, groebner_basis, hilbert_function, ideal_member

__all__ = ["QQ", "GF32003", "FieldSpec", "Polynomial", "WeightedRing",
           "Ideal", "MonomialOrder", "groebner_basis", "hilbert_function", "ideal_member"]
__version__ = "0.1.0"
