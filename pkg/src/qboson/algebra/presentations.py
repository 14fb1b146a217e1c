"""Presented algebras: the Hopf bricks, U_q, B_q and the quantized Weyl algebra.

Every algebra here shares the monomial layout F-word * E-word * T^torus. Products are
normalized by moving torus letters right (T x = q^(wt x, T) x T) and, where an algebra has
both letter kinds, by one crossing rule for upper_i * lower_j.
"""

from __future__ import annotations

from functools import cache
from itertools import groupby
from typing import TYPE_CHECKING

from loguru import logger

from qboson.algebra.elements import Algebra, Element, Key, Monomial, TensorElement, add_into
from qboson.algebra.scalars import QRat
from qboson.errors import BrickError, NotHopfError

if TYPE_CHECKING:
    from qboson.algebra.lattice import CartanData, Weight

# One crossing rule: upper_i * lower_j = c * lower_j * upper_i + sum_k d_k * T^(w_k).
Crossing = tuple[QRat, tuple[tuple[QRat, "Weight"], ...]]


class PresentedAlgebra(Algebra):
    """Algebra on monomials (F-word, E-word, torus)."""

    def __init__(
        self,
        tag: str,
        cartan: CartanData,
        *,
        lower: str | None,
        upper: str | None,
        torus: str | None,
        memoize: bool = True,
    ) -> None:
        super().__init__(tag, cartan, memoize)
        self.lower_symbol = lower
        self.upper_symbol = upper
        self.torus_symbol = torus
        self._roots = tuple(cartan.simple_root(i) for i in range(cartan.rank))
        self._crossed: dict[tuple[tuple[int, ...], int], dict[Monomial, QRat]] = {}

    # --- Basis interface ---

    def unit_key(self) -> Monomial:
        return Monomial((), (), self.cartan.zero())

    def basis_weight(self, key: Key) -> Weight:
        assert isinstance(key, Monomial)
        weight = self.cartan.zero()
        for i in key.upper:
            weight = weight + self._roots[i]
        for j in key.lower:
            weight = weight - self._roots[j]
        return weight

    def basis_degree(self, key: Key) -> int:
        assert isinstance(key, Monomial)
        return key.degree

    def monomial(
        self,
        lower: tuple[int, ...] = (),
        upper: tuple[int, ...] = (),
        torus: Weight | None = None,
    ) -> Monomial:
        for i in (*lower, *upper):
            if not 0 <= i < self.cartan.rank:
                raise BrickError(f"generator index {i + 1} outside rank {self.cartan.rank}")
        if lower and self.lower_symbol is None:
            raise BrickError(f"{self.tag} has no lower generators")
        if upper and self.upper_symbol is None:
            raise BrickError(f"{self.tag} has no upper generators")
        torus = torus if torus is not None else self.cartan.zero()
        if not torus.is_zero() and self.torus_symbol is None:
            raise BrickError(f"{self.tag} has no torus")
        return Monomial(tuple(lower), tuple(upper), torus)

    def upper_generator(self, i: int) -> Element:
        return self.basis_element(self.monomial(upper=(i,)))

    def lower_generator(self, i: int) -> Element:
        return self.basis_element(self.monomial(lower=(i,)))

    def torus_element(self, weight: Weight) -> Element:
        return self.basis_element(self.monomial(torus=weight))

    def root_torus(self, i: int, power: int = 1) -> Element:
        """T_(power * alpha_i)."""
        return self.torus_element(self._roots[i] * power)

    # --- Straightening ---

    def _crossing(self, i: int, j: int) -> Crossing:
        raise BrickError(f"{self.tag} has no crossing rule for upper_{i + 1} * lower_{j + 1}")

    def _times_upper(self, terms: dict[Monomial, QRat], i: int) -> dict[Monomial, QRat]:
        root = self._roots[i]
        result: dict[Monomial, QRat] = {}
        for mono, coeff in terms.items():
            factor = self.cartan.q_inner(root, mono.torus)
            add_into(result, Monomial(mono.lower, (*mono.upper, i), mono.torus), coeff * factor)
        return result

    def _upper_word_times_lower(self, word: tuple[int, ...], j: int) -> dict[Monomial, QRat]:
        """Normal form of E-word * F_j with torus relative to the word."""
        key = (word, j)
        cached = self._crossed.get(key)
        if cached is not None:
            return cached
        zero = self.cartan.zero()
        if not word:
            result = {Monomial((j,), (), zero): QRat.one()}
        else:
            head, last = word[:-1], word[-1]
            c, extras = self._crossing(last, j)
            result = {}
            if c:
                for mono, coeff in self._times_upper(
                    self._upper_word_times_lower(head, j), last
                ).items():
                    add_into(result, mono, coeff * c)
            for d, w in extras:
                add_into(result, Monomial((), head, w), d)
        self._crossed[key] = result
        return result

    def _times_lower(self, terms: dict[Monomial, QRat], j: int) -> dict[Monomial, QRat]:
        root = self._roots[j]
        result: dict[Monomial, QRat] = {}
        for mono, coeff in terms.items():
            factor = coeff * self.cartan.q_inner(-root, mono.torus)
            if not mono.upper:
                add_into(result, Monomial((*mono.lower, j), (), mono.torus), factor)
                continue
            for inner, c in self._upper_word_times_lower(mono.upper, j).items():
                combined = Monomial(
                    (*mono.lower, *inner.lower), inner.upper, inner.torus + mono.torus
                )
                add_into(result, combined, factor * c)
        return result

    def _mul_basis(self, left: Key, right: Key) -> dict[Key, QRat]:
        assert isinstance(left, Monomial)
        assert isinstance(right, Monomial)
        terms: dict[Monomial, QRat] = {left: QRat.one()}
        for j in right.lower:
            terms = self._times_lower(terms, j)
        for i in right.upper:
            terms = self._times_upper(terms, i)
        if not right.torus.is_zero():
            terms = {m.with_torus(m.torus + right.torus): c for m, c in terms.items()}
        return dict(terms)

    # --- Rendering ---

    def _render_letters(self, symbol: str | None, word: tuple[int, ...]) -> list[str]:
        pieces = []
        for index, run in groupby(word):
            count = len(list(run))
            letter = f"{symbol}{index + 1}"
            pieces.append(letter if count == 1 else f"{letter}^{count}")
        return pieces

    def render_torus(self, weight: Weight) -> str:
        symbol = self.torus_symbol or "T"
        coords = self.cartan.root_coordinates(weight)
        if coords is None:
            return f"{symbol}{{{weight}}}"
        if self.cartan.rank == 1:
            return symbol if coords[0] == 1 else f"{symbol}^{coords[0]}"
        pieces = []
        for i, n in enumerate(coords):
            if n:
                base = f"{symbol}{i + 1}"
                pieces.append(base if n == 1 else f"{base}^{n}")
        return "*".join(pieces)

    def render_basis(self, key: Key) -> str:
        assert isinstance(key, Monomial)
        pieces = self._render_letters(self.lower_symbol, key.lower)
        pieces += self._render_letters(self.upper_symbol, key.upper)
        if not key.torus.is_zero():
            pieces.append(self.render_torus(key.torus))
        return "*".join(pieces) if pieces else "1"


class HopfBrick(PresentedAlgebra):
    """A Hopf algebra on one letter kind plus torus.

    Delta(x_i) = x_i (x) T^(right_shift * alpha_i) + T^(left_shift * alpha_i) (x) x_i,
    Delta(T) = T (x) T.
    """

    is_hopf = True

    def __init__(
        self,
        tag: str,
        cartan: CartanData,
        *,
        positive: bool,
        letter: str,
        torus: str,
        right_shift: int,
        left_shift: int,
        memoize: bool = True,
    ) -> None:
        super().__init__(
            tag,
            cartan,
            lower=None if positive else letter,
            upper=letter if positive else None,
            torus=torus,
            memoize=memoize,
        )
        self.positive = positive
        self.right_shift = right_shift
        self.left_shift = left_shift
        self._coproducts: dict[Monomial, dict[tuple[Key, ...], QRat]] = {}
        self._antipodes: dict[tuple[Monomial, bool], Element] = {}

    def letters(self, mono: Monomial) -> tuple[int, ...]:
        return mono.upper if self.positive else mono.lower

    def word(self, letters: tuple[int, ...], torus: Weight | None = None) -> Monomial:
        if self.positive:
            return self.monomial(upper=letters, torus=torus)
        return self.monomial(lower=letters, torus=torus)

    def generator(self, i: int) -> Element:
        return self.basis_element(self.word((i,)))

    # --- Coproduct ---

    def delta_monomial(self, mono: Monomial) -> dict[tuple[Key, ...], QRat]:
        """Delta of one basis monomial as {(left, right): coeff}."""
        cached = self._coproducts.get(mono)
        if cached is not None:
            return cached
        unit = self.unit_key()
        terms: dict[tuple[Key, ...], QRat] = {(unit, unit): QRat.one()}
        for i in self.letters(mono):
            letter = self.word((i,))
            right_torus = self.unit_key().with_torus(self._roots[i] * self.right_shift)
            left_torus = self.unit_key().with_torus(self._roots[i] * self.left_shift)
            expanded: dict[tuple[Key, ...], QRat] = {}
            for (a, b), coeff in terms.items():
                for p, r in ((letter, right_torus), (left_torus, letter)):
                    for ka, ca in self.mul_basis(a, p).items():
                        for kb, cb in self.mul_basis(b, r).items():
                            add_into(expanded, (ka, kb), coeff * ca * cb)
            terms = expanded
        if not mono.torus.is_zero():
            terms = {
                (a.with_torus(a.torus + mono.torus), b.with_torus(b.torus + mono.torus)): c
                for (a, b), c in terms.items()
            }
        if self.memoize:
            self._coproducts[mono] = terms
        return terms

    def delta(self, x: Element) -> TensorElement:
        """Coproduct of x as a 2-fold tensor."""
        self.check(x)
        result: dict[tuple[Key, ...], QRat] = {}
        for mono, coeff in x.terms.items():
            for keys, c in self.delta_monomial(mono).items():
                add_into(result, keys, coeff * c)
        return TensorElement((self, self), result)

    def delta_iter(self, x: Element, k: int) -> TensorElement:
        """k-fold iterated coproduct (k legs); k=1 returns x itself as a 1-fold tensor."""
        if k < 1:
            raise ValueError("iterated coproduct needs at least one leg")
        tensor = TensorElement.pure(x)
        for legs in range(1, k):
            tensor = tensor.expand_leg(
                legs - 1,
                lambda key: TensorElement((self, self), self.delta_monomial(key)),
                (self, self),
            )
        return tensor

    def counit(self, x: Element) -> QRat:
        self.check(x)
        total = QRat.zero()
        for mono, coeff in x.terms.items():
            if mono.is_torus():
                total += coeff
        return total

    def counit_basis(self, mono: Key) -> QRat:
        assert isinstance(mono, Monomial)
        return QRat.one() if mono.is_torus() else QRat.zero()

    # --- Antipodes ---

    def _antipode_generator(self, i: int, inverse: bool) -> Element:
        # S(x) = -T^(-l a) x T^(-r a); S^-1(x) = -T^(-r a) x T^(-l a)
        before, after = (
            (self.right_shift, self.left_shift) if inverse else (self.left_shift, self.right_shift)
        )
        return -(self.root_torus(i, -before) * self.generator(i) * self.root_torus(i, -after))

    def antipode_monomial(self, mono: Monomial, inverse: bool = False) -> Element:
        key = (mono, inverse)
        cached = self._antipodes.get(key)
        if cached is not None:
            return cached
        result = self.torus_element(-mono.torus)
        for i in reversed(self.letters(mono)):
            result = result * self._antipode_generator(i, inverse)
        if self.memoize:
            self._antipodes[key] = result
        return result

    def antipode(self, x: Element) -> Element:
        self.check(x)
        return x.map_terms(lambda key: self.antipode_monomial(key))  # type: ignore[arg-type]

    def antipode_inv(self, x: Element) -> Element:
        self.check(x)
        return x.map_terms(lambda key: self.antipode_monomial(key, inverse=True))  # type: ignore[arg-type]

    def project_torus_free(self, x: Element) -> Element:
        """The projection pi: w T^lambda -> w (torus letters replaced by their counit)."""
        self.check(x)
        return x.map_terms(lambda key: {key.with_torus(self.cartan.zero()): QRat.one()})  # type: ignore[attr-defined]

    def is_torus_free(self, x: Element) -> bool:
        return all(mono.torus.is_zero() for mono in x.terms)  # type: ignore[attr-defined]


class QuantumGroup(PresentedAlgebra):
    """U_q: E_i F_j = F_j E_i + delta_ij (K_i - K_i^-1)/(q_i - q_i^-1)."""

    def _crossing(self, i: int, j: int) -> Crossing:
        if i != j:
            return QRat.one(), ()
        q_i = self.cartan.q_i(i)
        scale = QRat.one() / (q_i - q_i.inv())
        root = self._roots[i]
        return QRat.one(), ((scale, root), (-scale, -root))


class BosonAlgebra(PresentedAlgebra):
    """B_q and W_q: e'_i f_j = q^-(alpha_i, alpha_j) f_j e'_i + delta_ij."""

    def _crossing(self, i: int, j: int) -> Crossing:
        c = self.cartan.q_inner(self._roots[i], self._roots[j], sign=-1)
        if i != j:
            return c, ()
        return c, ((QRat.one(), self.cartan.zero()),)


ALIASES = {"bq++": "bq+", "bq--": "bq-"}

ALGEBRA_TAGS = ("uq+", "uq-", "bq+", "bq-", "uq", "bq", "wq")


def get_algebra(tag: str, cartan: CartanData, memoize: bool = True) -> PresentedAlgebra:
    """Shared algebra instance for a tag over the given Cartan data."""
    return _build(ALIASES.get(tag, tag), cartan, memoize)


@cache
def _build(tag: str, cartan: CartanData, memoize: bool) -> PresentedAlgebra:
    logger.debug(f"Creating algebra {tag} over {cartan}")
    if tag == "uq+":
        return HopfBrick(
            tag, cartan, positive=True, letter="E", torus="K",
            right_shift=-1, left_shift=0, memoize=memoize,
        )
    if tag == "uq-":
        return HopfBrick(
            tag, cartan, positive=False, letter="F", torus="K'",
            right_shift=0, left_shift=1, memoize=memoize,
        )
    if tag == "bq+":
        return HopfBrick(
            tag, cartan, positive=True, letter="e", torus="t",
            right_shift=0, left_shift=1, memoize=memoize,
        )
    if tag == "bq-":
        return HopfBrick(
            tag, cartan, positive=False, letter="f", torus="t'",
            right_shift=0, left_shift=1, memoize=memoize,
        )
    if tag == "uq":
        return QuantumGroup(tag, cartan, lower="F", upper="E", torus="K", memoize=memoize)
    if tag == "bq":
        return BosonAlgebra(tag, cartan, lower="f", upper="e", torus="t", memoize=memoize)
    if tag == "wq":
        return BosonAlgebra(tag, cartan, lower="f", upper="e", torus=None, memoize=memoize)
    raise BrickError(f"unknown algebra tag {tag!r}")


def get_brick(tag: str, cartan: CartanData, memoize: bool = True) -> HopfBrick:
    """Like get_algebra, but insists on a Hopf brick."""
    algebra = get_algebra(tag, cartan, memoize)
    if not isinstance(algebra, HopfBrick):
        raise NotHopfError(f"{algebra.tag} carries no Hopf structure")
    return algebra


def weight(x: Element) -> Weight | None:
    """Weight of a homogeneous element, None if inhomogeneous."""
    return x.weight()
