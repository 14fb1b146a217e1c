"""The Hopf pairing and the doubles built from it."""

from qboson.duality.doubles import (
    CocycleTwist,
    HeisenbergDouble,
    QuantumDouble,
    bq_normal_form,
    cocycle_twist,
    heisenberg_double,
    quantum_double,
    uq_normal_form,
)
from qboson.duality.pairing import PairingSession, RElement, WeightBlock

__all__ = [
    "CocycleTwist",
    "HeisenbergDouble",
    "PairingSession",
    "QuantumDouble",
    "RElement",
    "WeightBlock",
    "bq_normal_form",
    "cocycle_twist",
    "heisenberg_double",
    "quantum_double",
    "uq_normal_form",
]
