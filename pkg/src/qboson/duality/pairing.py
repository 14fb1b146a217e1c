"""The generalized Hopf pairing between a positive and a negative brick."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import TYPE_CHECKING, Literal

from loguru import logger
from sympy.utilities.iterables import multiset_permutations

from qboson.algebra import linalg
from qboson.algebra.elements import Element, Key, Monomial, TensorElement, add_into
from qboson.algebra.presentations import HopfBrick, get_brick
from qboson.algebra.scalars import QRat
from qboson.config import Settings, get_settings
from qboson.errors import BrickError, DegreeCapError, InhomogeneousError

if TYPE_CHECKING:
    from qboson.algebra.lattice import CartanData, Weight

Family = Literal["quantum", "boson"]

BRICKS: dict[str, tuple[str, str]] = {
    "quantum": ("uq+", "uq-"),
    "boson": ("bq+", "bq-"),
}


@dataclass(frozen=True)
class WeightBlock:
    """Gram data of one weight: words, Gram matrix, pivot sub-basis and its dual.

    gram[i][j] = pair(E-word upper_words[i], F-word lower_words[j]), with the F-side
    indexed by reversed words.
    """

    weight: Weight
    upper_words: tuple[tuple[int, ...], ...]
    lower_words: tuple[tuple[int, ...], ...]
    gram: linalg.Matrix
    row_pivots: tuple[int, ...]
    col_pivots: tuple[int, ...]
    pivot_inverse: linalg.Matrix = field(repr=False)

    @property
    def rank(self) -> int:
        return len(self.row_pivots)

    @property
    def size(self) -> int:
        return len(self.upper_words)

    def positive_basis(self, brick: HopfBrick) -> list[Element]:
        """The pivot E-words e_i."""
        return [brick.basis_element(brick.word(self.upper_words[r])) for r in self.row_pivots]

    def dual_basis(self, brick: HopfBrick) -> list[Element]:
        """f_i = sum_k (G_pp^-1)_ki F_(c_k), so that pair(e_i, f_j) = delta_ij."""
        duals = []
        for i in range(self.rank):
            terms: dict[Key, QRat] = {}
            for k, c in enumerate(self.col_pivots):
                coeff = self.pivot_inverse[k][i]
                if coeff:
                    add_into(terms, brick.word(self.lower_words[c]), coeff)
            duals.append(brick.element(terms))
        return duals

    def positive_kernel(self) -> linalg.Matrix:
        """Coefficient vectors (over upper_words) of the radical in this weight."""
        return linalg.nullspace(linalg.transpose(self.gram, self.size), self.size)

    def negative_kernel(self) -> linalg.Matrix:
        return linalg.nullspace(self.gram, self.size)


@dataclass(frozen=True)
class RElement:
    """The canonical element sum_beta sum_i f_(beta,i) (x) e_(beta,i), truncated by height."""

    bound: int
    components: dict[Weight, TensorElement]

    @property
    def total(self) -> TensorElement:
        parts = list(self.components.values())
        result = parts[0]
        for part in parts[1:]:
            result = result + part
        return result


class PairingSession:
    """Owner of the pairing phi: positive brick x negative brick -> Q(q^(1/D)).

    Quantum family: phi(E_i, F_j) = delta_ij/(q_i^-1 - q_i). Boson family:
    phi(e'_i, f_j) = delta_ij. Both: phi(T_lambda, T'_mu) = q^-(lambda, mu).
    """

    def __init__(
        self,
        cartan: CartanData,
        family: Family = "quantum",
        settings: Settings | None = None,
    ) -> None:
        """Initialize the session with its two bricks."""
        self.settings = settings or get_settings()
        if family not in BRICKS:
            raise BrickError(f"unknown pairing family {family!r}")
        self.cartan = cartan
        self.family = family
        positive, negative = BRICKS[family]
        self.positive = get_brick(positive, cartan, self.settings.memoize)
        self.negative = get_brick(negative, cartan, self.settings.memoize)
        self._roots = tuple(cartan.simple_root(i) for i in range(cartan.rank))
        self._memo: dict[tuple[Monomial, Monomial], QRat] = {}
        self._blocks: dict[Weight, WeightBlock] = {}

    # --- Pairing ---

    def generator_value(self, i: int) -> QRat:
        """phi(x_i, y_i) for the session's letters."""
        if self.family == "boson":
            return QRat.one()
        q_i = self.cartan.q_i(i)
        return QRat.one() / (q_i.inv() - q_i)

    def pair_monomials(self, a: Monomial, b: Monomial) -> QRat:
        """phi on basis monomials, by recursion on the first letter of b."""
        if sorted(a.upper) != sorted(b.lower):
            return QRat.zero()
        key = (a, b)
        cached = self._memo.get(key)
        if cached is not None:
            return cached
        if not b.lower:
            value = self.cartan.q_inner(a.torus, b.torus, sign=-1)
        else:
            # phi(a, y_j b') = sum phi(a_1, y_j) phi(a_2, b') with a_1 = x_j T^nu
            j = b.lower[0]
            rest = Monomial(b.lower[1:], (), b.torus)
            shift = self._roots[j] * self.negative.left_shift
            base = self.generator_value(j)
            value = QRat.zero()
            for (left, right), coeff in self.positive.delta_monomial(a).items():
                assert isinstance(left, Monomial)
                assert isinstance(right, Monomial)
                if left.upper != (j,):
                    continue
                inner = self.pair_monomials(right, rest)
                if inner:
                    value += coeff * base * self.cartan.q_inner(left.torus, shift, sign=-1) * inner
        if self.settings.memoize:
            self._memo[key] = value
        return value

    def pair(self, a: Element, b: Element) -> QRat:
        """phi(a, b) for a in the positive brick and b in the negative brick."""
        if a.algebra is not self.positive or b.algebra is not self.negative:
            raise BrickError(
                f"pair expects ({self.positive.tag}, {self.negative.tag}), "
                f"got ({a.algebra.tag}, {b.algebra.tag})"
            )
        total = QRat.zero()
        for ka, ca in a.terms.items():
            for kb, cb in b.terms.items():
                value = self.pair_monomials(ka, kb)  # type: ignore[arg-type]
                if value:
                    total += ca * cb * value
        return total

    def clear_cache(self) -> None:
        self._memo.clear()
        self._blocks.clear()

    @property
    def cache_size(self) -> int:
        return len(self._memo)

    # --- Words and blocks ---

    def _letters(self, weight: Weight) -> list[int]:
        coords = self.cartan.root_coordinates(weight)
        if coords is None or any(c < 0 for c in coords):
            raise InhomogeneousError(f"{weight} is not a nonnegative root-lattice weight")
        height = sum(coords)
        if height > self.settings.max_degree:
            raise DegreeCapError(f"height {height} of {weight} exceeds max_degree")
        return [i for i, c in enumerate(coords) for _ in range(c)]

    def words(self, weight: Weight) -> list[tuple[int, ...]]:
        """All words (lexicographic) whose letters sum to the given Q+ weight."""
        return [tuple(w) for w in multiset_permutations(self._letters(weight))]

    def weight_block(self, weight: Weight) -> WeightBlock:
        """Gram matrix, pivots and dual data for a Q+ weight."""
        cached = self._blocks.get(weight)
        if cached is not None:
            return cached
        upper = tuple(self.words(weight))
        lower = tuple(tuple(reversed(w)) for w in upper)
        zero = self.cartan.zero()
        gram = [
            [self.pair_monomials(Monomial((), u, zero), Monomial(v, (), zero)) for v in lower]
            for u in upper
        ]
        n = len(upper)
        _, row_pivots = linalg.rref(linalg.transpose(gram, n), n)
        _, col_pivots = linalg.rref(gram, n)
        pivot_inverse = linalg.inverse(linalg.select(gram, row_pivots, col_pivots))
        block = WeightBlock(weight, upper, lower, gram, row_pivots, col_pivots, pivot_inverse)
        logger.debug(f"Weight block {weight}: {n} words, rank {block.rank}")
        self._blocks[weight] = block
        return block

    def positive_weights(self, bound: int) -> list[Weight]:
        """Q+ weights of height 1..bound, by height then coordinates."""
        if bound > self.settings.max_degree:
            raise DegreeCapError(f"bound {bound} exceeds max_degree {self.settings.max_degree}")
        weights = []
        for coords in product(range(bound + 1), repeat=self.cartan.rank):
            height = sum(coords)
            if 0 < height <= bound:
                weights.append((height, coords))
        return [self.cartan.root_weight(c) for _, c in sorted(weights)]

    # --- Radicals and reductions ---

    def _homogeneous_weight(self, x: Element) -> Weight:
        weight = x.weight()
        if weight is None:
            raise InhomogeneousError("radical test needs a homogeneous element")
        return weight

    def in_radical(self, x: Element) -> bool:
        """True iff phi(x, w) = 0 for every F-word w of the opposite weight."""
        self.positive.check(x)
        if x.is_zero():
            return True
        weight = self._homogeneous_weight(x)
        zero = self.cartan.zero()
        for word in self.words(weight):
            if self.pair(x, self.negative.basis_element(Monomial(word, (), zero))):
                return False
        return True

    def in_radical_negative(self, y: Element) -> bool:
        """Mirror of in_radical on the negative brick."""
        self.negative.check(y)
        if y.is_zero():
            return True
        weight = self._homogeneous_weight(y)
        zero = self.cartan.zero()
        for word in self.words(-weight):
            if self.pair(self.positive.basis_element(Monomial((), word, zero)), y):
                return False
        return True

    def _torus_free_components(self, x: Element) -> dict[Weight, Element]:
        if any(not mono.torus.is_zero() for mono in x.terms):  # type: ignore[attr-defined]
            raise BrickError("reduction is defined on torus-free elements")
        return x.homogeneous_components()

    def reduce_negative(self, y: Element) -> Element:
        """Rewrite y in the pivot F-word basis, modulo the radical."""
        self.negative.check(y)
        terms: dict[Key, QRat] = {}
        for weight, part in self._torus_free_components(y).items():
            if weight.is_zero():
                for key, c in part.terms.items():
                    add_into(terms, key, c)
                continue
            block = self.weight_block(-weight)
            values = [self.pair(e, part) for e in block.positive_basis(self.positive)]
            coeffs = linalg.mat_vec(block.pivot_inverse, values)
            for k, c in enumerate(block.col_pivots):
                if coeffs[k]:
                    add_into(terms, self.negative.word(block.lower_words[c]), coeffs[k])
        return self.negative.element(terms)

    def reduce_positive(self, x: Element) -> Element:
        """Rewrite x in the pivot E-word basis, modulo the radical."""
        self.positive.check(x)
        terms: dict[Key, QRat] = {}
        zero = self.cartan.zero()
        for weight, part in self._torus_free_components(x).items():
            if weight.is_zero():
                for key, c in part.terms.items():
                    add_into(terms, key, c)
                continue
            block = self.weight_block(weight)
            values = [
                self.pair(part, self.negative.basis_element(Monomial(block.lower_words[c], (), zero)))
                for c in block.col_pivots
            ]
            inverse_t = linalg.transpose(block.pivot_inverse, block.rank)
            coeffs = linalg.mat_vec(inverse_t, values)
            for k, r in enumerate(block.row_pivots):
                if coeffs[k]:
                    add_into(terms, self.positive.word(block.upper_words[r]), coeffs[k])
        return self.positive.element(terms)

    def canonical_element(self, bound: int) -> RElement:
        """sum over 0 <= height(beta) <= bound of sum_i f_(beta,i) (x) e_(beta,i)."""
        unit = TensorElement.pure(self.negative.one(), self.positive.one())
        components = {self.cartan.zero(): unit}
        for weight in self.positive_weights(bound):
            block = self.weight_block(weight)
            if not block.rank:
                continue
            part = TensorElement.zero((self.negative, self.positive))
            for f, e in zip(
                block.dual_basis(self.negative), block.positive_basis(self.positive), strict=True
            ):
                part = part + TensorElement.pure(f, e)
            components[weight] = part
        logger.debug(f"Canonical element to height {bound}: {len(components)} weights")
        return RElement(bound, components)
