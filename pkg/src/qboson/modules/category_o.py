"""Category O for the q-Boson algebra.

A RawModule is a finite, interval-closed window of weight spaces with matrices for every
e'_i and f_i. An e'-step into an undeclared weight is zero; an f-step out of the window is
truncated, so relations that need it are not checked there. StandardModule builds
B_q^{--} (x) V from a seed space V and produces such windows.

On top of that: the comodule map rho(m) = R(1 (x) m), the extremal projector
P(m) = sum S_0(m_(-1)) m_(0), maximal vectors, and the decomposition
M = sum_lambda H(lambda)^(dim K(M)_lambda) with both isomorphisms written out per weight.
"""

from __future__ import annotations

import random
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Literal

from loguru import logger

from qboson.algebra import linalg
from qboson.algebra.braided import BraidedBrick
from qboson.algebra.elements import (
    Element,
    Key,
    Monomial,
    TensorElement,
    add_into,
    format_linear,
)
from qboson.algebra.lattice import CartanData, Weight
from qboson.algebra.scalars import QRat
from qboson.config import Settings, get_settings
from qboson.duality.pairing import PairingSession, RElement
from qboson.errors import (
    DivisionByZeroError,
    ModuleFormatError,
    NotInCategoryError,
    RelationError,
    TagMismatchError,
    TruncationError,
)
from qboson.modules.action import SchrodingerAction

Mode = Literal["weights", "torus-matrices"]
ModKey = tuple[Weight, int]
BlockKey = tuple[int, Weight]

ACTING_TAGS = ("bq", "wq", "bq+", "bq-")


def _reduce_leg(
    session: PairingSession, terms: Mapping[tuple[Key, ...], QRat], leg: int
) -> dict[tuple[Key, ...], QRat]:
    """Rewrite one f-word leg of a tensor in the pivot basis of its weight block."""
    groups: dict[tuple[Key, ...], dict[Key, QRat]] = {}
    for key, coeff in terms.items():
        rest = key[:leg] + key[leg + 1 :]
        add_into(groups.setdefault(rest, {}), key[leg], coeff)
    result: dict[tuple[Key, ...], QRat] = {}
    for rest, leg_terms in groups.items():
        if not leg_terms:
            continue
        reduced = session.reduce_negative(session.negative.element(leg_terms))
        for mono, coeff in reduced.terms.items():
            add_into(result, (*rest[:leg], mono, *rest[leg:]), coeff)
    return result


def _kernel_coordinates(basis: linalg.Matrix, dim: int) -> tuple[tuple[int, ...], linalg.Matrix]:
    """Pivot columns and inverse pivot block for solving sum_r c_r basis[r] = x."""
    _, pivots = linalg.rref(basis, dim)
    square = [[basis[r][j] for r in range(len(basis))] for j in pivots]
    return pivots, linalg.inverse(square)


class ModuleVector:
    """A vector of a RawModule, as sparse coordinates keyed by (weight, basis index)."""

    __slots__ = ("module", "terms")

    def __init__(self, module: RawModule, terms: Mapping[ModKey, QRat]) -> None:
        self.module = module
        self.terms: dict[ModKey, QRat] = {k: c for k, c in terms.items() if c}

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, key: ModKey) -> QRat:
        return self.terms.get(key, QRat.zero())

    def weight(self) -> Weight | None:
        """Common weight of all terms; None when inhomogeneous."""
        weights = {w for w, _ in self.terms}
        if not weights:
            return self.module.cartan.zero()
        return next(iter(weights)) if len(weights) == 1 else None

    def homogeneous_components(self) -> dict[Weight, ModuleVector]:
        parts: dict[Weight, dict[ModKey, QRat]] = {}
        for key, coeff in self.terms.items():
            parts.setdefault(key[0], {})[key] = coeff
        return {w: ModuleVector(self.module, terms) for w, terms in parts.items()}

    def coordinates(self, weight: Weight) -> list[QRat]:
        """Dense coordinates of the weight component."""
        return [self.coefficient((weight, i)) for i in range(self.module.spaces.get(weight, 0))]

    def scale(self, factor: QRat | int) -> ModuleVector:
        factor = QRat.coerce(factor)
        return ModuleVector(self.module, {k: factor * c for k, c in self.terms.items()})

    def __add__(self, other: ModuleVector) -> ModuleVector:
        if other.module is not self.module:
            raise TagMismatchError("module", "another module")
        result = dict(self.terms)
        for key, coeff in other.terms.items():
            add_into(result, key, coeff)
        return ModuleVector(self.module, result)

    def __neg__(self) -> ModuleVector:
        return self.scale(-1)

    def __sub__(self, other: ModuleVector) -> ModuleVector:
        return self + (-other)

    def __rmul__(self, factor: QRat | int) -> ModuleVector:
        return self.scale(factor)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ModuleVector):
            return NotImplemented
        return self.module is other.module and self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def __str__(self) -> str:
        ordered = sorted(self.terms.items(), key=lambda kv: (self.module.order(kv[0][0]), kv[0][1]))
        return format_linear((c, self.module.label(k)) for k, c in ordered)

    def __repr__(self) -> str:
        return f"ModuleVector({self})"


class ModuleTensor:
    """sum b_1 (x) ... (x) b_k (x) m with every f-word leg reduced to its pivot basis."""

    __slots__ = ("legs", "module", "terms")

    def __init__(
        self, module: RawModule, terms: Mapping[tuple[Key, ...], QRat], legs: int = 1
    ) -> None:
        self.module = module
        self.legs = legs
        reduced = {k: c for k, c in terms.items() if c}
        for leg in range(legs):
            reduced = _reduce_leg(module.session, reduced, leg)
        self.terms: dict[tuple[Key, ...], QRat] = reduced

    def is_zero(self) -> bool:
        return not self.terms

    def counit(self) -> ModuleVector:
        """(epsilon (x) id) on a one-leg tensor."""
        unit = self.module.session.negative.unit_key()
        terms: dict[ModKey, QRat] = {}
        for (b, key), coeff in self.terms.items():  # type: ignore[misc]
            if b == unit:
                add_into(terms, key, coeff)
        return ModuleVector(self.module, terms)

    def __add__(self, other: ModuleTensor) -> ModuleTensor:
        result = dict(self.terms)
        for key, coeff in other.terms.items():
            add_into(result, key, coeff)
        return ModuleTensor(self.module, result, self.legs)

    def __sub__(self, other: ModuleTensor) -> ModuleTensor:
        negated = {k: -c for k, c in other.terms.items()}
        return self + ModuleTensor(self.module, negated, other.legs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ModuleTensor):
            return NotImplemented
        return self.module is other.module and self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def __str__(self) -> str:
        negative = self.module.session.negative

        def body(key: tuple[Key, ...]) -> str:
            legs = [f"({negative.render_basis(b)})" for b in key[:-1]]
            return " ⊗ ".join([*legs, self.module.label(key[-1])])  # type: ignore[arg-type]

        ordered = sorted(
            self.terms.items(),
            key=lambda kv: (
                [negative.basis_sort_key(b) for b in kv[0][:-1]],
                self.module.order(kv[0][-1][0]),  # type: ignore[index]
                kv[0][-1][1],  # type: ignore[index]
            ),
        )
        return format_linear((c, body(k)) for k, c in ordered)


@dataclass
class RawModule:
    """A finite window of a module in O(B_q), given by action tables.

    e[(i, w)] is the matrix of e'_i: M_w -> M_(w + alpha_i), f[(i, w)] the matrix of
    f_i: M_w -> M_(w - alpha_i); shape dim(target) x dim(source). Missing blocks between
    declared weights are zero. In torus-matrices mode, torus[(k, w)] is t_(omega_k) on M_w.
    """

    cartan: CartanData
    spaces: dict[Weight, int]
    e: dict[BlockKey, linalg.Matrix] = field(default_factory=dict)
    f: dict[BlockKey, linalg.Matrix] = field(default_factory=dict)
    mode: Mode = "weights"
    torus: dict[BlockKey, linalg.Matrix] = field(default_factory=dict)
    labels: dict[Weight, list[str]] = field(default_factory=dict)
    settings: Settings = field(default_factory=get_settings, repr=False, compare=False)
    _nilpotence: int | None = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        rank = self.cartan.rank
        for weight, dim in self.spaces.items():
            if weight.rank != rank or dim < 0:
                raise ModuleFormatError(f"bad weight space {weight} of dimension {dim}")
        for kind, blocks in (("e", self.e), ("f", self.f)):
            for (i, weight), matrix in blocks.items():
                if not 0 <= i < rank or weight not in self.spaces:
                    raise ModuleFormatError(f"{kind}{i + 1} block from undeclared weight {weight}")
                target = self.target(kind, i, weight)
                if target not in self.spaces:
                    raise ModuleFormatError(
                        f"{kind}{i + 1} block from {weight} into undeclared weight {target}"
                    )
                self._check_shape(f"{kind}{i + 1} from {weight}", matrix, target, weight)
        if self.mode == "weights" and self.torus:
            raise ModuleFormatError("torus matrices given in weights mode")
        if self.mode == "torus-matrices":
            for weight, dim in self.spaces.items():
                for k in range(rank):
                    matrix = self.torus.get((k, weight))
                    if matrix is None and dim:
                        raise ModuleFormatError(f"missing t{k + 1} matrix on {weight}")
                    if matrix is not None:
                        self._check_shape(f"t{k + 1} on {weight}", matrix, weight, weight)
        for weight, names in self.labels.items():
            if len(names) != self.spaces.get(weight, 0):
                raise ModuleFormatError(f"{len(names)} labels for weight space {weight}")

    def _check_shape(self, name: str, matrix: linalg.Matrix, target: Weight, source: Weight) -> None:
        rows, cols = self.spaces[target], self.spaces[source]
        if len(matrix) != rows or any(len(row) != cols for row in matrix):
            raise ModuleFormatError(f"{name}: expected a {rows}x{cols} matrix")

    # --- Shape ---

    @property
    def rank(self) -> int:
        return self.cartan.rank

    @property
    def dimension(self) -> int:
        return sum(self.spaces.values())

    @cached_property
    def weights(self) -> list[Weight]:
        """Declared weights, highest coordinates first."""
        return sorted(self.spaces, key=lambda w: w.coords, reverse=True)

    def order(self, weight: Weight) -> int:
        return self.weights.index(weight)

    def target(self, kind: str, i: int, weight: Weight) -> Weight:
        root = self.cartan.simple_root(i)
        return weight + root if kind == "e" else weight - root

    def label(self, key: ModKey) -> str:
        weight, index = key
        names = self.labels.get(weight)
        return names[index] if names else f"v[{weight}]_{index}"

    def character(self) -> dict[Weight, int]:
        """The formal character sum dim(M_w) e^w on the window."""
        return {w: d for w, d in self.spaces.items() if d}

    @cached_property
    def height_bound(self) -> int:
        """Largest height separating two declared weights."""
        bound = 0
        for low, high in product(self.spaces, repeat=2):
            if self.cartan.is_nonnegative_root(high - low):
                bound = max(bound, self.cartan.height(high - low) or 0)
        return bound

    # --- Helpers shared with the pairing layer ---

    @cached_property
    def session(self) -> PairingSession:
        return PairingSession(self.cartan, "boson", self.settings)

    @cached_property
    def braided(self) -> BraidedBrick:
        return BraidedBrick(self.session.negative)

    @cached_property
    def r_element(self) -> RElement:
        """The canonical element truncated at the window's height bound."""
        return self.session.canonical_element(self.height_bound)

    # --- Vectors ---

    def zero_vector(self) -> ModuleVector:
        return ModuleVector(self, {})

    def basis_vector(self, key: ModKey) -> ModuleVector:
        weight, index = key
        if not 0 <= index < self.spaces.get(weight, 0):
            raise ModuleFormatError(f"no basis vector {index} in weight space {weight}")
        return ModuleVector(self, {key: QRat.one()})

    def vector(self, weight: Weight, coords: Sequence[QRat | int]) -> ModuleVector:
        if len(coords) != self.spaces.get(weight, -1):
            raise ModuleFormatError(f"{len(coords)} coordinates for weight space {weight}")
        return ModuleVector(self, {(weight, i): QRat.coerce(c) for i, c in enumerate(coords)})

    # --- Actions ---

    def block(self, kind: str, i: int, weight: Weight) -> linalg.Matrix | None:
        """Matrix of e'_i or f_i out of M_weight; None when the target is undeclared."""
        target = self.target(kind, i, weight)
        if target not in self.spaces:
            return None
        blocks = self.e if kind == "e" else self.f
        matrix = blocks.get((i, weight))
        return matrix if matrix is not None else linalg.zeros(self.spaces[target], self.spaces[weight])

    def apply_generator(self, kind: str, i: int, v: ModuleVector) -> ModuleVector:
        """e'_i.v or f_i.v.

        Raises:
            TruncationError: if f_i carries a nonzero component out of the window
        """
        terms: dict[ModKey, QRat] = {}
        for weight, part in v.homogeneous_components().items():
            matrix = self.block(kind, i, weight)
            if matrix is None:
                if kind == "f":
                    raise TruncationError(f"f{i + 1} leaves the window at weight {weight}")
                continue
            target = self.target(kind, i, weight)
            for index, coeff in enumerate(linalg.mat_vec(matrix, part.coordinates(weight))):
                add_into(terms, (target, index), coeff)
        return ModuleVector(self, terms)

    def _torus_power(self, k: int, weight: Weight, power: int) -> linalg.Matrix:
        matrix = self.torus[(k, weight)]
        if power < 0:
            matrix = linalg.inverse(matrix)
        result = linalg.identity(self.spaces[weight])
        for _ in range(abs(power)):
            result = linalg.matmul(matrix, result)
        return result

    def apply_torus(self, torus: Weight, v: ModuleVector) -> ModuleVector:
        """t_torus.v: q^(weight, torus) on weight spaces, or the torus matrices."""
        if torus.is_zero():
            return v
        if self.mode == "weights":
            return ModuleVector(
                self,
                {key: c * self.cartan.q_inner(key[0], torus) for key, c in v.terms.items()},
            )
        terms: dict[ModKey, QRat] = {}
        for weight, part in v.homogeneous_components().items():
            coords = part.coordinates(weight)
            for k, power in enumerate(torus.coords):
                if power:
                    coords = linalg.mat_vec(self._torus_power(k, weight, power), coords)
            for index, coeff in enumerate(coords):
                add_into(terms, (weight, index), coeff)
        return ModuleVector(self, terms)

    def act(self, x: Element, v: ModuleVector) -> ModuleVector:
        """Action of an element of B_q (or W_q, or either brick) on v.

        Monomials f-word * e-word * t act right to left.
        """
        if x.algebra.tag not in ACTING_TAGS or x.algebra.cartan != self.cartan:
            raise TagMismatchError("bq", x.algebra.tag)
        result = self.zero_vector()
        for mono, coeff in x.terms.items():
            assert isinstance(mono, Monomial)
            w = self.apply_torus(mono.torus, v)
            for i in reversed(mono.upper):
                w = self.apply_generator("e", i, w)
            for j in reversed(mono.lower):
                w = self.apply_generator("f", j, w)
            result = result + w.scale(coeff)
        return result

    # --- Validation ---

    def basis_vectors(self, weight: Weight) -> Iterator[ModuleVector]:
        for index in range(self.spaces[weight]):
            yield ModuleVector(self, {(weight, index): QRat.one()})

    def _check_boson_relations(self) -> None:
        """e'_i f_j - q^-(alpha_i, alpha_j) f_j e'_i = delta_ij on every weight space."""
        for weight in self.weights:
            if not self.spaces[weight]:
                continue
            for j, i in product(range(self.rank), repeat=2):
                if self.block("f", j, weight) is None:
                    logger.debug(f"f{j + 1} truncated at {weight}; relation check skipped")
                    continue
                target = self.target("e", i, self.target("f", j, weight))
                if target not in self.spaces:
                    continue
                factor = self.cartan.q_inner(
                    self.cartan.simple_root(i), self.cartan.simple_root(j), sign=-1
                )
                for v in self.basis_vectors(weight):
                    e_f = self.apply_generator("e", i, self.apply_generator("f", j, v))
                    f_e = self.apply_generator("f", j, self.apply_generator("e", i, v))
                    lhs = e_f - f_e.scale(factor)
                    expected = v if i == j else self.zero_vector()
                    if lhs != expected:
                        raise RelationError(
                            f"e'{i + 1} f{j + 1} - q^-(a{i + 1},a{j + 1}) f{j + 1} e'{i + 1}",
                            str(weight),
                            f"got {lhs}, expected {expected}",
                        )

    def _apply_word(self, kind: str, word: tuple[int, ...], v: ModuleVector) -> ModuleVector:
        for i in reversed(word):
            v = self.apply_generator(kind, i, v)
        return v

    def _check_serre(self) -> None:
        """Radical elements of the Serre weights must act as zero."""
        cartan = self.cartan
        for i, j in product(range(self.rank), repeat=2):
            if i == j:
                continue
            coords = [0] * self.rank
            coords[i] = 1 - cartan.cartan[i][j]
            coords[j] = 1
            block = self.session.weight_block(cartan.root_weight(coords))
            checks = [("e", block.upper_words, c) for c in block.positive_kernel()]
            checks += [("f", block.lower_words, c) for c in block.negative_kernel()]
            for kind, words, kernel in checks:
                for weight in self.weights:
                    for v in self.basis_vectors(weight):
                        total = self.zero_vector()
                        try:
                            for word, coeff in zip(words, kernel, strict=True):
                                if coeff:
                                    total = total + self._apply_word(kind, word, v).scale(coeff)
                        except TruncationError:
                            continue
                        if not total.is_zero():
                            raise RelationError(
                                f"Serre ({kind}{i + 1}, {kind}{j + 1})", str(weight), str(total)
                            )

    def _check_torus(self) -> None:
        """Torus matrices: invertible, commuting, and conjugating e'_i and f_i by q^(+-(alpha_i, omega_k))."""
        if self.mode != "torus-matrices":
            return
        for weight in self.weights:
            dim = self.spaces[weight]
            if not dim:
                continue
            for k in range(self.rank):
                try:
                    linalg.inverse(self.torus[(k, weight)])
                except DivisionByZeroError as exc:
                    raise RelationError(f"t{k + 1} invertible", str(weight)) from exc
                for other in range(k + 1, self.rank):
                    a, b = self.torus[(k, weight)], self.torus[(other, weight)]
                    if linalg.matmul(a, b) != linalg.matmul(b, a):
                        raise RelationError(
                            f"t{k + 1} t{other + 1} = t{other + 1} t{k + 1}", str(weight)
                        )
                omega = self.cartan.fundamental_weight(k)
                for kind, i in product(("e", "f"), range(self.rank)):
                    matrix = self.block(kind, i, weight)
                    target = self.target(kind, i, weight)
                    if matrix is None or not self.spaces[target]:
                        continue
                    sign = 1 if kind == "e" else -1
                    factor = self.cartan.q_inner(self.cartan.simple_root(i), omega, sign=sign)
                    lhs = linalg.matmul(self.torus[(k, target)], matrix)
                    rhs = linalg.matmul(matrix, self.torus[(k, weight)])
                    if lhs != [[factor * x for x in row] for row in rhs]:
                        raise RelationError(
                            f"t{k + 1} {kind}{i + 1} t{k + 1}^-1 = q^({sign}(a{i + 1},w{k + 1})) "
                            f"{kind}{i + 1}",
                            str(weight),
                        )

    def nilpotence_degree(self) -> int:
        """Least l such that every e'-word of length l acts as zero.

        Raises:
            NotInCategoryError: if l would exceed settings.nilpotence_cap
        """
        images: dict[Weight, linalg.Matrix] = {
            w: linalg.identity(d) for w, d in self.spaces.items() if d
        }
        length = 0
        while images:
            if length > self.settings.nilpotence_cap:
                raise NotInCategoryError(
                    f"e'-words of length {length} still act nontrivially "
                    f"(cap {self.settings.nilpotence_cap})"
                )
            raised: dict[Weight, linalg.Matrix] = {}
            for weight, vectors in images.items():
                for i in range(self.rank):
                    matrix = self.block("e", i, weight)
                    if matrix is None:
                        continue
                    target = self.target("e", i, weight)
                    for vector in vectors:
                        image = linalg.mat_vec(matrix, vector)
                        if any(image):
                            raised.setdefault(target, []).append(image)
            images = {}
            for weight, vectors in raised.items():
                reduced, pivots = linalg.rref(vectors, self.spaces[weight])
                images[weight] = reduced[: len(pivots)]
            length += 1
        return length

    def check_relations(self) -> int:
        """Run every relation check and return the e'-nilpotence degree.

        Raises:
            RelationError: naming the violated relation and weight space
            NotInCategoryError: if the e'-action is not nilpotent within the cap
        """
        self._check_boson_relations()
        if self.rank > 1:
            self._check_serre()
        self._check_torus()
        degree = self.nilpotence_degree()
        logger.debug(f"Module of dimension {self.dimension} passes relation checks")
        return degree

    def validate(self) -> int:
        """check_relations, run once per module."""
        if self._nilpotence is None:
            self._nilpotence = self.check_relations()
        return self._nilpotence

    # --- Maximal vectors, rho and P ---

    def maximal_vectors(self) -> dict[Weight, linalg.Matrix]:
        """Per weight, a basis (coordinate rows) of the common kernel of all e'_i."""
        self.validate()
        result: dict[Weight, linalg.Matrix] = {}
        for weight in self.weights:
            dim = self.spaces[weight]
            if not dim:
                continue
            rows: linalg.Matrix = []
            for i in range(self.rank):
                matrix = self.block("e", i, weight)
                if matrix is not None:
                    rows.extend(matrix)
            basis = linalg.nullspace(rows, dim)
            if basis:
                result[weight] = basis
        return result

    def maximal_basis(self) -> list[ModuleVector]:
        return [
            self.vector(weight, row)
            for weight, rows in self.maximal_vectors().items()
            for row in rows
        ]

    def coaction_terms(self, m: ModuleVector) -> Iterator[tuple[Monomial, QRat, ModuleVector]]:
        """(f-word, coefficient, e-word . m) for every nonzero term of R(1 (x) m)."""
        self.validate()
        positive = self.session.positive
        for weight, part in m.homogeneous_components().items():
            for beta, tensor in self.r_element.components.items():
                if weight + beta not in self.spaces:
                    continue
                for (f_key, e_key), coeff in tensor.terms.items():
                    moved = self.act(positive.basis_element(e_key), part)
                    if not moved.is_zero():
                        yield f_key, coeff, moved  # type: ignore[misc]

    def rho(self, m: ModuleVector) -> ModuleTensor:
        """rho(m) = sum_beta sum_i f_(beta,i) (x) e_(beta,i).m."""
        terms: dict[tuple[Key, ...], QRat] = {}
        for f_key, coeff, moved in self.coaction_terms(m):
            for key, c in moved.terms.items():
                add_into(terms, (f_key, key), coeff * c)
        return ModuleTensor(self, terms)

    def project(self, m: ModuleVector) -> ModuleVector:
        """The extremal projector P(m) = sum S_0(f_(beta,i)).(e_(beta,i).m)."""
        negative = self.session.negative
        result = self.zero_vector()
        for f_key, coeff, moved in self.coaction_terms(m):
            antipode = self.braided.antipode(negative.basis_element(f_key))
            result = result + self.act(antipode, moved).scale(coeff)
        return result

    def compatibility_check(self, f: Element, m: ModuleVector, form: str = "braided") -> bool:
        """rho(f.m) == Delta_0(f) rho(m) (braided form) or sum pi(f_1 m_(-1)) (x) f_2.m_(0)."""
        negative = self.session.negative
        lhs = self.rho(self.act(f, m))
        rho_m = self.rho(m)
        terms: dict[tuple[Key, ...], QRat] = {}
        if form == "braided":
            for (f1, f2), c1 in self.braided.delta0(f).terms.items():
                wt2 = negative.basis_weight(f2)
                for (b, key), c2 in rho_m.terms.items():
                    factor = c1 * c2 * self.cartan.q_inner(wt2, negative.basis_weight(b), sign=-1)
                    moved = self.act(negative.basis_element(f2), self.basis_vector(key))  # type: ignore[arg-type]
                    for prod_key, c3 in negative.mul_basis(f1, b).items():
                        for mk, c4 in moved.terms.items():
                            add_into(terms, (prod_key, mk), factor * c3 * c4)
        elif form == "pi":
            for (f1, f2), c1 in negative.delta(f).terms.items():
                for (b, key), c2 in rho_m.terms.items():
                    projected = negative.project_torus_free(
                        negative.basis_element(f1) * negative.basis_element(b)
                    )
                    moved = self.act(negative.basis_element(f2), self.basis_vector(key))  # type: ignore[arg-type]
                    for prod_key, c3 in projected.terms.items():
                        for mk, c4 in moved.terms.items():
                            add_into(terms, (prod_key, mk), c1 * c2 * c3 * c4)
        else:
            raise ValueError(f"unknown compatibility form {form!r}")
        return lhs == ModuleTensor(self, terms)

    def coaction_law_check(self, m: ModuleVector) -> bool:
        """(Delta_0 (x) id) rho(m) == (id (x) rho) rho(m)."""
        negative = self.session.negative
        lhs: dict[tuple[Key, ...], QRat] = {}
        rhs: dict[tuple[Key, ...], QRat] = {}
        for (b, key), coeff in self.rho(m).terms.items():
            for (b1, b2), c in self.braided.delta0(negative.basis_element(b)).terms.items():
                add_into(lhs, (b1, b2, key), coeff * c)
            for (b2, key2), c in self.rho(self.basis_vector(key)).terms.items():  # type: ignore[arg-type]
                add_into(rhs, (b, b2, key2), coeff * c)
        return ModuleTensor(self, lhs, legs=2) == ModuleTensor(self, rhs, legs=2)

    # --- Constructions ---

    def direct_sum(self, other: RawModule) -> RawModule:
        """Block-diagonal direct sum on the union of the two windows."""
        if other.cartan != self.cartan or other.mode != self.mode:
            raise ModuleFormatError("direct sum needs equal Cartan data and torus mode")
        parts = (self, other)
        spaces = {w: sum(p.spaces.get(w, 0) for p in parts) for w in {*self.spaces, *other.spaces}}
        offsets = {
            w: [0, self.spaces.get(w, 0)] for w in spaces
        }
        blocks: dict[str, dict[BlockKey, linalg.Matrix]] = {"e": {}, "f": {}}
        for kind, i, weight in product(("e", "f"), range(self.rank), spaces):
            target = self.target(kind, i, weight)
            if target not in spaces or not spaces[weight] or not spaces[target]:
                continue
            matrix = linalg.zeros(spaces[target], spaces[weight])
            for n, part in enumerate(parts):
                if not part.spaces.get(weight):
                    continue
                if weight not in part.spaces or target not in part.spaces:
                    if kind == "f":
                        raise ModuleFormatError(
                            f"summand {n + 1} is truncated at {weight} but {target} is declared"
                        )
                    continue
                sub = part.block(kind, i, weight)
                assert sub is not None
                for r, row in enumerate(sub):
                    for c, value in enumerate(row):
                        matrix[offsets[target][n] + r][offsets[weight][n] + c] = value
            blocks[kind][(i, weight)] = matrix
        torus: dict[BlockKey, linalg.Matrix] = {}
        if self.mode == "torus-matrices":
            for k, weight in product(range(self.rank), spaces):
                matrix = linalg.zeros(spaces[weight], spaces[weight])
                for n, part in enumerate(parts):
                    for r, row in enumerate(part.torus.get((k, weight), [])):
                        for c, value in enumerate(row):
                            matrix[offsets[weight][n] + r][offsets[weight][n] + c] = value
                torus[(k, weight)] = matrix
        labels = {}
        if self.labels or other.labels:
            labels = {
                w: [p.label((w, i)) for p in parts for i in range(p.spaces.get(w, 0))]
                for w in spaces
            }
        return RawModule(
            self.cartan, spaces, blocks["e"], blocks["f"], self.mode, torus, labels, self.settings
        )

    def change_basis(self, bases: Mapping[Weight, linalg.Matrix]) -> RawModule:
        """Re-express the module in new bases.

        bases[w] has the new basis vectors of M_w as columns (old coordinates); weights
        not listed keep their basis. Every block becomes P_target^-1 A P_source.
        """
        def basis(weight: Weight) -> linalg.Matrix:
            return bases.get(weight) or linalg.identity(self.spaces[weight])

        inverses = {w: linalg.inverse(basis(w)) for w in self.spaces if self.spaces[w]}

        def conjugate(matrix: linalg.Matrix, target: Weight, source: Weight) -> linalg.Matrix:
            if not self.spaces[target] or not self.spaces[source]:
                return matrix
            return linalg.matmul(inverses[target], linalg.matmul(matrix, basis(source)))

        e = {(i, w): conjugate(m, self.target("e", i, w), w) for (i, w), m in self.e.items()}
        f = {(i, w): conjugate(m, self.target("f", i, w), w) for (i, w), m in self.f.items()}
        torus = {(k, w): conjugate(m, w, w) for (k, w), m in self.torus.items()}
        return RawModule(self.cartan, dict(self.spaces), e, f, self.mode, torus, {}, self.settings)


class StandardModule:
    """B_q^{--} (x) V for a finite seed space V.

    e.(x (x) v) = sum phi(e, x_1) x_2 (x) v and f.(x (x) v) = fx (x) v. In weights mode the
    seeds are weight vectors and t_mu acts on x (x) v by q^((lambda_v - beta, mu)) for x of
    degree -beta. In torus mode every seed sits at label 0 and t_(omega_k) acts by
    q^-(beta, omega_k) (x) T_k for the given seed matrices T_k.
    """

    def __init__(
        self,
        cartan: CartanData,
        seeds: Sequence[Weight],
        *,
        labels: Sequence[str] | None = None,
        torus: Sequence[linalg.Matrix] | None = None,
        settings: Settings | None = None,
    ) -> None:
        self.settings = settings or get_settings()
        self.cartan = cartan
        self.seeds = tuple(seeds)
        self.seed_labels = tuple(labels) if labels else tuple(f"v{s}" for s in range(len(seeds)))
        if len(self.seed_labels) != len(self.seeds):
            raise ModuleFormatError("one label per seed vector")
        self.mode: Mode = "weights" if torus is None else "torus-matrices"
        self.torus = (
            [[[QRat.coerce(x) for x in row] for row in m] for m in torus]
            if torus is not None
            else None
        )
        if self.torus is not None:
            n = len(self.seeds)
            if len(self.torus) != cartan.rank or any(
                len(m) != n or any(len(row) != n for row in m) for m in self.torus
            ):
                raise ModuleFormatError(f"torus mode needs {cartan.rank} seed matrices of size {n}")
            if any(not s.is_zero() for s in self.seeds):
                raise ModuleFormatError("torus-mode seeds sit at label 0")
        self.session = PairingSession(cartan, "boson", self.settings)
        self.action = SchrodingerAction(self.session)
        self._raw: dict[int, RawModule] = {}
        self._index: dict[int, dict[Weight, dict[tuple[int, tuple[int, ...]], int]]] = {}

    @classmethod
    def highest_weight(
        cls, cartan: CartanData, weight: Weight, settings: Settings | None = None
    ) -> StandardModule:
        """H(lambda): one seed of weight lambda."""
        return cls(cartan, [weight], labels=["v"], settings=settings)

    @classmethod
    def from_torus(
        cls,
        cartan: CartanData,
        matrices: Sequence[linalg.Matrix],
        settings: Settings | None = None,
    ) -> StandardModule:
        """The module attached to a U_q^0-module given by t_(omega_k) matrices."""
        n = len(matrices[0]) if matrices else 0
        return cls(cartan, [cartan.zero()] * n, torus=matrices, settings=settings)

    # --- Window ---

    def _below(self, top: Weight, weight: Weight) -> tuple[int, ...] | None:
        coords = self.cartan.root_coordinates(top - weight)
        if coords is None or any(c < 0 for c in coords):
            return None
        return coords

    def window(self, depth: int) -> list[Weight]:
        """Seed cones cut at height depth, closed upward inside every cone they meet."""
        zero = self.cartan.zero()
        betas = [zero, *self.session.positive_weights(depth)]
        cone = {seed - beta for seed in set(self.seeds) for beta in betas}
        closed = set(cone)
        for weight in cone:
            for seed in set(self.seeds):
                coords = self._below(seed, weight)
                if coords is None:
                    continue
                for sub in product(*(range(c + 1) for c in coords)):
                    closed.add(seed - self.cartan.root_weight(sub))
        return sorted(closed, key=lambda w: w.coords, reverse=True)

    def _basis(self, weight: Weight) -> list[tuple[int, tuple[int, ...]]]:
        """(seed, pivot f-word) pairs spanning the weight space."""
        basis = []
        for s, seed in enumerate(self.seeds):
            coords = self._below(seed, weight)
            if coords is None:
                continue
            if not any(coords):
                basis.append((s, ()))
                continue
            block = self.session.weight_block(seed - weight)
            basis.extend((s, block.lower_words[c]) for c in block.col_pivots)
        return basis

    def _column(
        self, element: Element, seed: int, index: dict[tuple[int, tuple[int, ...]], int]
    ) -> list[QRat]:
        column = [QRat.zero()] * len(index)
        for mono, coeff in self.session.reduce_negative(element).terms.items():
            column[index[(seed, mono.lower)]] += coeff  # type: ignore[attr-defined]
        return column

    def to_raw(self, depth: int = 3) -> RawModule:
        """The finite window of height depth below every seed, as a RawModule."""
        cached = self._raw.get(depth)
        if cached is not None:
            return cached
        weights = self.window(depth)
        bases = {w: self._basis(w) for w in weights}
        index = {w: {key: n for n, key in enumerate(b)} for w, b in bases.items()}
        negative, positive = self.session.negative, self.session.positive
        zero = self.cartan.zero()
        e: dict[BlockKey, linalg.Matrix] = {}
        f: dict[BlockKey, linalg.Matrix] = {}
        for weight in weights:
            for i in range(self.cartan.rank):
                root = self.cartan.simple_root(i)
                for kind, target in (("e", weight + root), ("f", weight - root)):
                    if target not in index or not bases[weight] or not bases[target]:
                        continue
                    columns = []
                    for s, word in bases[weight]:
                        x = negative.basis_element(Monomial(word, (), zero))
                        if kind == "f":
                            image = negative.generator(i) * x
                        else:
                            image = self.action.act(positive.generator(i), x)
                        columns.append(self._column(image, s, index[target]))
                    blocks = e if kind == "e" else f
                    blocks[(i, weight)] = linalg.transpose(columns, len(bases[target]))
        torus: dict[BlockKey, linalg.Matrix] = {}
        if self.torus is not None:
            for weight in weights:
                for k in range(self.cartan.rank):
                    scale = self.cartan.q_inner(weight, self.cartan.fundamental_weight(k))
                    torus[(k, weight)] = [
                        [
                            scale * self.torus[k][s][t] if row_word == col_word else QRat.zero()
                            for t, col_word in bases[weight]
                        ]
                        for s, row_word in bases[weight]
                    ]
        labels = {w: [self._label(s, word) for s, word in b] for w, b in bases.items()}
        raw = RawModule(
            self.cartan,
            {w: len(b) for w, b in bases.items()},
            e,
            f,
            self.mode,
            torus,
            labels,
            self.settings,
        )
        logger.debug(f"Standard module window of depth {depth}: {len(weights)} weights")
        self._raw[depth] = raw
        self._index[depth] = index
        return raw

    def _label(self, seed: int, word: tuple[int, ...]) -> str:
        if not word:
            return self.seed_labels[seed]
        negative = self.session.negative
        return f"{negative.render_basis(Monomial(word, (), self.cartan.zero()))}*{self.seed_labels[seed]}"

    def vector(self, x: Element, seed: int = 0, depth: int = 3) -> ModuleVector:
        """x (x) v_seed for x in B_q^{--}, as a vector of to_raw(depth).

        Raises:
            TruncationError: if x has a component below the window
        """
        raw = self.to_raw(depth)
        index = self._index[depth]
        terms: dict[ModKey, QRat] = {}
        for mono, coeff in self.session.reduce_negative(x).terms.items():
            weight = self.seeds[seed] + self.session.negative.basis_weight(mono)
            position = index.get(weight, {}).get((seed, mono.lower))  # type: ignore[attr-defined]
            if position is None:
                raise TruncationError(f"{x} (x) {self.seed_labels[seed]} leaves the depth-{depth} window")
            add_into(terms, (weight, position), coeff)
        return ModuleVector(raw, terms)

    def seed_vector(self, seed: int = 0, depth: int = 3) -> ModuleVector:
        return self.vector(self.session.negative.one(), seed, depth)

    def multiplicities(self) -> dict[Weight, int]:
        """The multiplicities a decomposition must return: one H(lambda) per seed."""
        counts: dict[Weight, int] = {}
        for seed in self.seeds:
            counts[seed] = counts.get(seed, 0) + 1
        return counts


@dataclass
class Decomposition:
    """K(M) per weight plus both halves of M = sum_beta B_(-beta) (x) K(M)_(mu + beta).

    components[mu] labels the rows of phi[mu] (and columns of psi[mu]) by
    (beta, index of f_(beta,i), index of the K basis vector at mu + beta).
    """

    module: RawModule
    multiplicities: dict[Weight, int]
    maximal: dict[Weight, linalg.Matrix]
    components: dict[Weight, list[tuple[Weight, int, int]]]
    phi: dict[Weight, linalg.Matrix]
    psi: dict[Weight, linalg.Matrix]
    nilpotence: int
    verified: bool
    torus_seed: dict[BlockKey, linalg.Matrix] = field(default_factory=dict)

    def summary(self) -> str:
        parts = ", ".join(f"{w}: {n}" for w, n in sorted(self.multiplicities.items(), key=lambda kv: kv[0].coords, reverse=True))
        status = "verified" if self.verified else "NOT verified"
        return f"{{{parts}}} ({status})"


def _dual_pairs(tensor: TensorElement, session: PairingSession) -> list[tuple[Monomial, Element]]:
    """Regroup sum f (x) e by its pivot e-words: [(e_(beta,i), f_(beta,i))]."""
    grouped: dict[Monomial, dict[Key, QRat]] = {}
    for (f_key, e_key), coeff in tensor.terms.items():
        add_into(grouped.setdefault(e_key, {}), f_key, coeff)
    negative = session.negative
    order = sorted(grouped, key=session.positive.basis_sort_key)
    return [(e_key, negative.element(grouped[e_key])) for e_key in order]


def decompose(module: RawModule | StandardModule, depth: int = 3) -> Decomposition:
    """Decompose a module in O(B_q) into highest-weight modules H(lambda).

    Args:
        module: a raw module, or a standard module taken at the given window depth
        depth: window depth for standard modules

    Returns:
        Multiplicities dim K(M)_lambda, bases of K(M), and per weight the matrices of
        m -> sum m_(-1) (x) P(m_(0)) and b (x) k -> b.k with a flag recording that both
        composites are identities.
    """
    raw = module.to_raw(depth) if isinstance(module, StandardModule) else module
    nilpotence = raw.validate()
    maximal = raw.maximal_vectors()
    session = raw.session
    solvers = {w: _kernel_coordinates(b, raw.spaces[w]) for w, b in maximal.items()}
    pairs = {beta: _dual_pairs(t, session) for beta, t in raw.r_element.components.items()}

    def solve(weight: Weight, vector: ModuleVector) -> list[QRat]:
        pivots, inverse = solvers[weight]
        coords = vector.coordinates(weight)
        return linalg.mat_vec(inverse, [coords[j] for j in pivots])

    components: dict[Weight, list[tuple[Weight, int, int]]] = {}
    phi: dict[Weight, linalg.Matrix] = {}
    psi: dict[Weight, linalg.Matrix] = {}
    verified = True
    for mu in raw.weights:
        dim = raw.spaces[mu]
        if not dim:
            continue
        labels: list[tuple[Weight, int, int]] = []
        pieces: list[tuple[Weight, Monomial, Element]] = []
        for beta, beta_pairs in pairs.items():
            nu = mu + beta
            if nu not in maximal:
                continue
            for i, (e_key, f_elem) in enumerate(beta_pairs):
                pieces.append((nu, e_key, f_elem))
                labels.extend((beta, i, k) for k in range(len(maximal[nu])))
        phi_columns = []
        for v in raw.basis_vectors(mu):
            column: list[QRat] = []
            for nu, e_key, _ in pieces:
                moved = raw.act(session.positive.basis_element(e_key), v)
                column.extend(solve(nu, raw.project(moved)))
            phi_columns.append(column)
        psi_columns = []
        for nu, _, f_elem in pieces:
            for row in maximal[nu]:
                psi_columns.append(raw.act(f_elem, raw.vector(nu, row)).coordinates(mu))
        n = len(labels)
        phi[mu] = linalg.transpose(phi_columns, n)
        psi[mu] = linalg.transpose(psi_columns, dim) if psi_columns else [[] for _ in range(dim)]
        components[mu] = labels
        identity_back = linalg.matmul(psi[mu], phi[mu], n) if n else linalg.zeros(dim, dim)
        identity_there = linalg.matmul(phi[mu], psi[mu], dim)
        if identity_back != linalg.identity(dim) or identity_there != linalg.identity(n):
            logger.warning(f"Decomposition maps are not mutually inverse at weight {mu}")
            verified = False
    torus_seed: dict[BlockKey, linalg.Matrix] = {}
    if raw.mode == "torus-matrices":
        for nu, rows in maximal.items():
            for k in range(raw.rank):
                columns = [
                    solve(nu, raw.vector(nu, linalg.mat_vec(raw.torus[(k, nu)], row)))
                    for row in rows
                ]
                torus_seed[(k, nu)] = linalg.transpose(columns, len(rows))
    result = Decomposition(
        raw,
        {w: len(b) for w, b in maximal.items()},
        maximal,
        components,
        phi,
        psi,
        nilpotence,
        verified,
        torus_seed,
    )
    logger.info(f"Decomposed module of dimension {raw.dimension}: {result.summary()}")
    return result


# --- Module-level operations ---


def rho(m: ModuleVector) -> ModuleTensor:
    return m.module.rho(m)


def projector_P(m: ModuleVector) -> ModuleVector:
    return m.module.project(m)


def maximal_vectors(module: RawModule | StandardModule, depth: int = 3) -> dict[Weight, linalg.Matrix]:
    raw = module.to_raw(depth) if isinstance(module, StandardModule) else module
    return raw.maximal_vectors()


def compatibility_check(f: Element, m: ModuleVector, form: str = "braided") -> bool:
    return m.module.compatibility_check(f, m, form)


def highest_weight_character(
    cartan: CartanData, top: Weight, weights: Sequence[Weight], session: PairingSession
) -> dict[Weight, int]:
    """dim H(top)_w for each w in weights."""
    character = {}
    for weight in weights:
        gap = top - weight
        if gap.is_zero():
            character[weight] = 1
        elif cartan.is_nonnegative_root(gap):
            character[weight] = session.weight_block(gap).rank
    return character


def character_check(decomposition: Decomposition) -> bool:
    """ch M == sum_lambda dim K(M)_lambda ch H(lambda) on the window."""
    raw = decomposition.module
    expected: dict[Weight, int] = {}
    for top, count in decomposition.multiplicities.items():
        for weight, dim in highest_weight_character(raw.cartan, top, raw.weights, raw.session).items():
            expected[weight] = expected.get(weight, 0) + count * dim
    return {w: d for w, d in expected.items() if d} == raw.character()


def freeness_check(module: StandardModule, depth: int = 3) -> bool:
    """b -> b.v is injective on B_q^{--} modulo the radical, weight by weight."""
    raw = module.to_raw(depth)
    negative = module.session.negative
    zero = module.cartan.zero()
    for s, seed in enumerate(module.seeds):
        v = module.seed_vector(s, depth)
        for beta in module.session.positive_weights(depth):
            weight = seed - beta
            block = module.session.weight_block(beta)
            images = [
                raw.act(negative.basis_element(Monomial(word, (), zero)), v).coordinates(weight)
                for word in block.lower_words
            ]
            if linalg.rank(images, raw.spaces[weight]) != block.rank:
                return False
    return True


def _random_laurent(rng: random.Random) -> QRat:
    value = QRat.zero()
    for _ in range(rng.randint(0, 2)):
        value += QRat.q_power(rng.randint(-2, 2)) * rng.choice((-2, -1, 1, 2))
    return value


def scramble_bases(module: RawModule, seed: int = 0) -> dict[Weight, linalg.Matrix]:
    """Random invertible weight-preserving bases: unit lower times q-monomial upper triangular."""
    rng = random.Random(seed)
    bases: dict[Weight, linalg.Matrix] = {}
    for weight in module.weights:
        n = module.spaces[weight]
        if not n:
            continue
        lower = [
            [QRat.one() if i == j else QRat.coerce(rng.randint(-2, 2)) if j < i else QRat.zero() for j in range(n)]
            for i in range(n)
        ]
        upper = [
            [
                QRat.q_power(rng.randint(-2, 2)) if i == j else _random_laurent(rng) if j > i else QRat.zero()
                for j in range(n)
            ]
            for i in range(n)
        ]
        bases[weight] = linalg.matmul(lower, upper)
    return bases


def scrambled_direct_sum(modules: Sequence[RawModule], seed: int = 0) -> RawModule:
    """Direct sum of the modules in a randomly scrambled weight-preserving basis."""
    total = modules[0]
    for module in modules[1:]:
        total = total.direct_sum(module)
    scrambled = total.change_basis(scramble_bases(total, seed))
    logger.debug(f"Scrambled direct sum of {len(modules)} modules with seed {seed}")
    return scrambled
