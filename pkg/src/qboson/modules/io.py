"""Module files (JSON or YAML) and decomposition reports."""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import TYPE_CHECKING, Any, Literal

import yaml
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from qboson.algebra.lattice import CartanData, Weight, validate_cartan
from qboson.algebra.scalars import QRat
from qboson.config import Settings, get_settings
from qboson.errors import ModuleFormatError, ReportError
from qboson.modules.category_o import BlockKey, RawModule

if TYPE_CHECKING:
    from qboson.algebra import linalg
    from qboson.modules.category_o import Decomposition

_GENERATOR = re.compile(r"^([eft])(\d+)$")


class ActionBlock(BaseModel):
    """One matrix of a generator between two weight spaces."""

    model_config = ConfigDict(populate_by_name=True, extra="forbid")

    source: str = Field(alias="from")
    target: str = Field(alias="to")
    matrix: list[list[str | int]]


class CartanFile(BaseModel):
    """Cartan matrix and symmetrizers, as accepted by --cartan-file."""

    model_config = ConfigDict(extra="ignore")

    cartan: list[list[int]]
    symmetrizers: list[int]
    name: str | None = None


class ModuleFile(BaseModel):
    """On-disk description of a RawModule.

    Weights are comma-separated fundamental-weight coordinates; scalars use the scalar
    grammar (``"1 + q^-2"``). Generators are ``e<i>`` (e'_i), ``f<i>`` and, in
    torus-matrices mode, ``t<k>`` for t_(omega_k).
    """

    model_config = ConfigDict(extra="forbid")

    cartan: list[list[int]]
    symmetrizers: list[int]
    mode: Literal["weights", "torus-matrices"] = "weights"
    spaces: dict[str, int]
    actions: dict[str, list[ActionBlock]] = Field(default_factory=dict)
    labels: dict[str, list[str]] = Field(default_factory=dict)


def _weight(text: str, cartan: CartanData) -> Weight:
    weight = Weight.parse(text)
    if weight.rank != cartan.rank:
        raise ModuleFormatError(f"weight {text!r} has rank {weight.rank}, expected {cartan.rank}")
    return weight


def _scalar(value: str | int) -> QRat:
    return QRat.coerce(value) if isinstance(value, int) else QRat.parse(value)


def module_from_data(data: Any, settings: Settings | None = None) -> RawModule:
    """Validate a decoded module document and build the RawModule.

    Raises:
        ModuleFormatError: on schema violations or inconsistent blocks
    """
    try:
        document = ModuleFile.model_validate(data)
    except ValidationError as exc:
        raise ModuleFormatError(f"invalid module file: {exc}") from exc
    cartan = validate_cartan(document.cartan, document.symmetrizers)
    spaces = {_weight(w, cartan): dim for w, dim in document.spaces.items()}
    blocks: dict[str, dict[BlockKey, linalg.Matrix]] = {"e": {}, "f": {}, "t": {}}
    for name, entries in document.actions.items():
        match = _GENERATOR.match(name)
        if match is None:
            raise ModuleFormatError(f"unknown generator {name!r}; use e<i>, f<i> or t<k>")
        kind, index = match.group(1), int(match.group(2)) - 1
        if not 0 <= index < cartan.rank:
            raise ModuleFormatError(f"generator {name} outside rank {cartan.rank}")
        root = cartan.simple_root(index)
        for entry in entries:
            source, target = _weight(entry.source, cartan), _weight(entry.target, cartan)
            expected = {"e": source + root, "f": source - root, "t": source}[kind]
            if target != expected:
                raise ModuleFormatError(
                    f"{name} block from {entry.source} must land in {expected}, not {entry.target}"
                )
            key = (index, source)
            if key in blocks[kind]:
                raise ModuleFormatError(f"duplicate {name} block from {entry.source}")
            blocks[kind][key] = [[_scalar(x) for x in row] for row in entry.matrix]
    if blocks["t"] and document.mode != "torus-matrices":
        raise ModuleFormatError("t<k> blocks require mode 'torus-matrices'")
    labels = {_weight(w, cartan): names for w, names in document.labels.items()}
    return RawModule(
        cartan,
        spaces,
        blocks["e"],
        blocks["f"],
        document.mode,
        blocks["t"],
        labels,
        settings or get_settings(),
    )


def _load(path: Path) -> Any:
    if not path.exists():
        raise ModuleFormatError(f"file {path} does not exist")
    text = path.read_text(encoding="utf-8")
    try:
        if path.suffix in (".yaml", ".yml"):
            return yaml.safe_load(text)
        return json.loads(text)
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise ModuleFormatError(f"cannot decode {path}: {exc}") from exc


def read_cartan(path: Path) -> CartanData:
    """Read Cartan data from a JSON or YAML file (module files qualify too)."""
    try:
        document = CartanFile.model_validate(_load(path))
    except ValidationError as exc:
        raise ModuleFormatError(f"invalid Cartan file: {exc}") from exc
    return validate_cartan(document.cartan, document.symmetrizers, name=document.name)


def read_module(path: Path, settings: Settings | None = None) -> RawModule:
    """Read a module file; ``.yaml``/``.yml`` is parsed as YAML, anything else as JSON."""
    module = module_from_data(_load(path), settings)
    logger.info(f"Loaded module {path.name}: dimension {module.dimension}, mode {module.mode}")
    return module


def _matrix(rows: linalg.Matrix) -> list[list[str]]:
    return [[str(x) for x in row] for row in rows]


def module_to_data(module: RawModule) -> dict[str, Any]:
    """The ModuleFile document of a RawModule."""
    actions: dict[str, list[dict[str, Any]]] = {}
    sources = (("e", module.e), ("f", module.f), ("t", module.torus))
    for kind, table in sources:
        for (index, source), matrix in sorted(table.items(), key=lambda kv: (kv[0][0], kv[0][1].coords)):
            if kind == "t":
                target = source
            else:
                target = module.target(kind, index, source)
            actions.setdefault(f"{kind}{index + 1}", []).append(
                {"from": str(source), "to": str(target), "matrix": _matrix(matrix)}
            )
    document: dict[str, Any] = {
        "cartan": [list(row) for row in module.cartan.cartan],
        "symmetrizers": list(module.cartan.symmetrizers),
        "mode": module.mode,
        "spaces": {str(w): module.spaces[w] for w in module.weights},
        "actions": actions,
    }
    if module.labels:
        document["labels"] = {str(w): names for w, names in module.labels.items()}
    return document


def write_module(module: RawModule, path: Path) -> Path:
    """Write a module file readable by read_module."""
    path.parent.mkdir(parents=True, exist_ok=True)
    document = module_to_data(module)
    if path.suffix in (".yaml", ".yml"):
        path.write_text(yaml.safe_dump(document, sort_keys=True), encoding="utf-8")
    else:
        path.write_text(json.dumps(document, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    logger.info(f"Wrote module to {path}")
    return path


def decomposition_to_data(result: Decomposition) -> dict[str, Any]:
    """Multiplicities, bases of K(M) and the isomorphism matrices per weight."""
    weights = result.module.weights
    return {
        "multiplicities": {
            str(w): result.multiplicities[w] for w in weights if w in result.multiplicities
        },
        "verified": result.verified,
        "nilpotence_degree": result.nilpotence,
        "maximal_vectors": {str(w): _matrix(result.maximal[w]) for w in weights if w in result.maximal},
        "isomorphisms": {
            str(w): {
                "components": [[str(beta), i, k] for beta, i, k in result.components[w]],
                "phi": _matrix(result.phi[w]),
                "psi": _matrix(result.psi[w]),
            }
            for w in weights
            if w in result.phi
        },
        "torus_seed": {
            f"t{k + 1}@{w}": _matrix(matrix)
            for (k, w), matrix in sorted(result.torus_seed.items(), key=lambda kv: (kv[0][0], kv[0][1].coords))
        },
    }


def write_decomposition(result: Decomposition, path: Path) -> Path:
    """Write the decomposition report as sorted JSON.

    Raises:
        ReportError: if the directory or the file cannot be written
    """
    document = decomposition_to_data(result)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(document, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    except OSError as exc:
        raise ReportError(f"cannot write report {path}: {exc}") from exc
    logger.info(f"Wrote decomposition report to {path}")
    return path
