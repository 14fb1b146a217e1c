"""qboson - exact symbolic kernel for quantum doubles, q-Boson algebras and category O."""

from qboson.core import QBoson

__version__ = "0.1.0"
__all__ = ["QBoson"]
