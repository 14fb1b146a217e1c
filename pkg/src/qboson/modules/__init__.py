"""Actions of the doubles and modules in category O."""

from qboson.modules.action import SchrodingerAction, YDVector
from qboson.modules.category_o import (
    Decomposition,
    ModuleTensor,
    ModuleVector,
    RawModule,
    StandardModule,
    character_check,
    compatibility_check,
    decompose,
    freeness_check,
    maximal_vectors,
    projector_P,
    rho,
    scrambled_direct_sum,
)
from qboson.modules.io import (
    decomposition_to_data,
    module_from_data,
    module_to_data,
    read_cartan,
    read_module,
    write_decomposition,
    write_module,
)

__all__ = [
    "Decomposition",
    "ModuleTensor",
    "ModuleVector",
    "RawModule",
    "SchrodingerAction",
    "StandardModule",
    "YDVector",
    "character_check",
    "compatibility_check",
    "decompose",
    "decomposition_to_data",
    "freeness_check",
    "maximal_vectors",
    "module_from_data",
    "module_to_data",
    "projector_P",
    "read_cartan",
    "read_module",
    "rho",
    "scrambled_direct_sum",
    "write_decomposition",
    "write_module",
]
