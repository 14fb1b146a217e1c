"""Scalars, lattices and the presented algebras."""

from qboson.algebra.elements import Element, Monomial, TensorElement
from qboson.algebra.lattice import CartanData, Weight, cartan_preset, validate_cartan
from qboson.algebra.presentations import get_algebra, get_brick
from qboson.algebra.scalars import QRat, q_binom, q_fact, q_int, q_number_identity_checks

__all__ = [
    "CartanData",
    "Element",
    "Monomial",
    "QRat",
    "TensorElement",
    "Weight",
    "cartan_preset",
    "get_algebra",
    "get_brick",
    "q_binom",
    "q_fact",
    "q_int",
    "q_number_identity_checks",
    "validate_cartan",
]
