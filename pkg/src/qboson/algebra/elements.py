"""Normal-ordered monomials, algebra elements and tensors of elements."""

from __future__ import annotations

from abc import ABC, abstractmethod
from collections.abc import Callable, Hashable, Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Any

from qboson.algebra.scalars import QRat
from qboson.errors import TagMismatchError

if TYPE_CHECKING:
    from qboson.algebra.lattice import CartanData, Weight

Scalar = QRat | int | Fraction
Key = Hashable


@dataclass(frozen=True, order=True, slots=True)
class Monomial:
    """F-word, E-word and torus exponent, read as F-word * E-word * T^torus.

    Letters are 0-based generator indices; words are free (never reordered).
    """

    lower: tuple[int, ...]
    upper: tuple[int, ...]
    torus: Weight

    @property
    def degree(self) -> int:
        return len(self.lower) + len(self.upper)

    def is_torus(self) -> bool:
        return not self.lower and not self.upper

    def with_torus(self, torus: Weight) -> Monomial:
        return Monomial(self.lower, self.upper, torus)


def add_into(target: dict[Any, QRat], key: Any, coeff: QRat) -> None:
    """Accumulate coeff at key, dropping the entry when it cancels."""
    total = target.get(key)
    total = coeff if total is None else total + coeff
    if total:
        target[key] = total
    else:
        target.pop(key, None)


def format_linear(pairs: Iterable[tuple[QRat, str]]) -> str:
    """Render sum of coeff * body with signs pulled out of the coefficients."""
    pieces: list[str] = []
    for position, (coeff, body) in enumerate(pairs):
        negative = coeff.is_negative()
        magnitude = -coeff if negative else coeff
        scalar = str(magnitude)
        if body == "1":
            text = scalar if magnitude.is_monomial() else f"({scalar})"
        elif magnitude == 1:
            text = body
        elif magnitude.is_monomial():
            text = f"{scalar} * {body}"
        else:
            text = f"({scalar}) * {body}"
        if position == 0:
            pieces.append(f"-{text}" if negative else text)
        else:
            pieces.append(f" - {text}" if negative else f" + {text}")
    return "".join(pieces) if pieces else "0"


class Algebra(ABC):
    """An associative algebra with a fixed basis of hashable keys."""

    tag: str
    cartan: CartanData
    is_hopf: bool = False

    def __init__(self, tag: str, cartan: CartanData, memoize: bool = True) -> None:
        self.tag = tag
        self.cartan = cartan
        self.memoize = memoize
        self._products: dict[tuple[Key, Key], dict[Key, QRat]] = {}

    # --- Basis interface ---

    @abstractmethod
    def unit_key(self) -> Key: ...

    @abstractmethod
    def _mul_basis(self, left: Key, right: Key) -> dict[Key, QRat]: ...

    @abstractmethod
    def render_basis(self, key: Key) -> str: ...

    @abstractmethod
    def basis_weight(self, key: Key) -> Weight: ...

    @abstractmethod
    def basis_degree(self, key: Key) -> int: ...

    def basis_sort_key(self, key: Key) -> Any:
        return (-self.basis_degree(key), key)

    def mul_basis(self, left: Key, right: Key) -> dict[Key, QRat]:
        """Product of two basis elements, memoized when enabled."""
        if not self.memoize:
            return self._mul_basis(left, right)
        pair = (left, right)
        cached = self._products.get(pair)
        if cached is None:
            cached = self._mul_basis(left, right)
            self._products[pair] = cached
        return cached

    # --- Element construction ---

    def element(self, terms: Mapping[Key, QRat] | None = None) -> Element:
        return Element(self, dict(terms or {}))

    def basis_element(self, key: Key, coeff: Scalar = 1) -> Element:
        return Element(self, {key: QRat.coerce(coeff)})

    def one(self) -> Element:
        return self.basis_element(self.unit_key())

    def zero(self) -> Element:
        return Element(self, {})

    def scalar(self, value: Scalar) -> Element:
        return self.basis_element(self.unit_key(), value)

    def check(self, x: Element) -> None:
        if x.algebra is not self:
            raise TagMismatchError(self.tag, x.algebra.tag)

    def multiply(self, x: Element, y: Element) -> Element:
        """Normal form of x*y."""
        self.check(x)
        self.check(y)
        result: dict[Key, QRat] = {}
        for kx, cx in x.terms.items():
            for ky, cy in y.terms.items():
                coeff = cx * cy
                for key, c in self.mul_basis(kx, ky).items():
                    add_into(result, key, coeff * c)
        return Element(self, result)

    def render(self, x: Element) -> str:
        return format_linear((c, self.render_basis(k)) for k, c in x.sorted_terms())

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.tag} over {self.cartan}>"


class Element:
    """A finite linear combination of basis keys of one algebra. Immutable."""

    __slots__ = ("algebra", "terms")

    algebra: Algebra
    terms: dict[Key, QRat]

    def __init__(self, algebra: Algebra, terms: Mapping[Key, QRat]) -> None:
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "terms", {k: c for k, c in terms.items() if c})

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("Element is immutable")

    # --- Inspection ---

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, key: Key) -> QRat:
        return self.terms.get(key, QRat.zero())

    def sorted_terms(self) -> list[tuple[Key, QRat]]:
        return sorted(self.terms.items(), key=lambda kv: self.algebra.basis_sort_key(kv[0]))

    def degree(self) -> int:
        return max((self.algebra.basis_degree(k) for k in self.terms), default=0)

    def weight(self) -> Weight | None:
        """Common weight of all terms; None when inhomogeneous (zero has weight 0)."""
        weights = {self.algebra.basis_weight(k) for k in self.terms}
        if not weights:
            return self.algebra.cartan.zero()
        if len(weights) > 1:
            return None
        return next(iter(weights))

    def homogeneous_components(self) -> dict[Weight, Element]:
        parts: dict[Weight, dict[Key, QRat]] = {}
        for key, coeff in self.terms.items():
            parts.setdefault(self.algebra.basis_weight(key), {})[key] = coeff
        return {w: Element(self.algebra, terms) for w, terms in parts.items()}

    def map_terms(
        self,
        fn: Callable[[Key], Element | Mapping[Key, QRat]],
        target: Algebra | None = None,
    ) -> Element:
        """Apply a linear map given on basis keys; the image algebra defaults to fn's."""
        result: dict[Key, QRat] = {}
        for key, coeff in self.terms.items():
            image = fn(key)
            if isinstance(image, Element):
                target = target or image.algebra
                image = image.terms
            for k, c in image.items():
                add_into(result, k, coeff * c)
        return Element(target or self.algebra, result)

    # --- Arithmetic ---

    def _coerce(self, other: Element | Scalar) -> Element:
        if isinstance(other, Element):
            self.algebra.check(other)
            return other
        return self.algebra.scalar(QRat.coerce(other))

    def __add__(self, other: Element | Scalar) -> Element:
        other = self._coerce(other)
        result = dict(self.terms)
        for key, coeff in other.terms.items():
            add_into(result, key, coeff)
        return Element(self.algebra, result)

    __radd__ = __add__

    def __neg__(self) -> Element:
        return Element(self.algebra, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: Element | Scalar) -> Element:
        return self + (-self._coerce(other))

    def __rsub__(self, other: Element | Scalar) -> Element:
        return self._coerce(other) - self

    def scale(self, factor: Scalar) -> Element:
        factor = QRat.coerce(factor)
        if not factor:
            return Element(self.algebra, {})
        return Element(self.algebra, {k: factor * c for k, c in self.terms.items()})

    def __mul__(self, other: Element | Scalar) -> Element:
        if isinstance(other, Element):
            return self.algebra.multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other: Scalar) -> Element:
        return self.scale(other)

    def __truediv__(self, other: Scalar) -> Element:
        return self.scale(QRat.one() / QRat.coerce(other))

    def __pow__(self, exponent: int) -> Element:
        if exponent < 0:
            raise ValueError("negative powers of algebra elements are not defined")
        result = self.algebra.one()
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int | Fraction | QRat):
            return self == self.algebra.scalar(QRat.coerce(other))
        if not isinstance(other, Element):
            return NotImplemented
        return self.algebra is other.algebra and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((id(self.algebra), frozenset(self.terms.items())))

    def __str__(self) -> str:
        return self.algebra.render(self)

    def __repr__(self) -> str:
        return f"Element[{self.algebra.tag}]({self})"


class TensorElement:
    """A finite sum of k-fold pure tensors, one basis key per leg."""

    __slots__ = ("factors", "terms")

    factors: tuple[Algebra, ...]
    terms: dict[tuple[Key, ...], QRat]

    def __init__(self, factors: tuple[Algebra, ...], terms: Mapping[tuple[Key, ...], QRat]) -> None:
        object.__setattr__(self, "factors", factors)
        object.__setattr__(self, "terms", {k: c for k, c in terms.items() if c})

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("TensorElement is immutable")

    @classmethod
    def pure(cls, *elements: Element) -> TensorElement:
        """The tensor product of the given elements."""
        terms: dict[tuple[Key, ...], QRat] = {(): QRat.one()}
        for element in elements:
            expanded: dict[tuple[Key, ...], QRat] = {}
            for keys, coeff in terms.items():
                for key, c in element.terms.items():
                    add_into(expanded, (*keys, key), coeff * c)
            terms = expanded
        return cls(tuple(e.algebra for e in elements), terms)

    @classmethod
    def zero(cls, factors: tuple[Algebra, ...]) -> TensorElement:
        return cls(factors, {})

    @property
    def degree(self) -> int:
        """Tensor degree k."""
        return len(self.factors)

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: TensorElement) -> None:
        if len(self.factors) != len(other.factors) or any(
            a is not b for a, b in zip(self.factors, other.factors, strict=True)
        ):
            left = "⊗".join(a.tag for a in self.factors)
            right = "⊗".join(a.tag for a in other.factors)
            raise TagMismatchError(left, right)

    def __add__(self, other: TensorElement) -> TensorElement:
        self._check(other)
        result = dict(self.terms)
        for keys, coeff in other.terms.items():
            add_into(result, keys, coeff)
        return TensorElement(self.factors, result)

    def __neg__(self) -> TensorElement:
        return TensorElement(self.factors, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: TensorElement) -> TensorElement:
        return self + (-other)

    def scale(self, factor: Scalar) -> TensorElement:
        factor = QRat.coerce(factor)
        return TensorElement(self.factors, {k: factor * c for k, c in self.terms.items()})

    def __rmul__(self, other: Scalar) -> TensorElement:
        return self.scale(other)

    def __mul__(self, other: TensorElement | Scalar) -> TensorElement:
        """Componentwise product in the (unbraided) tensor product algebra."""
        if not isinstance(other, TensorElement):
            return self.scale(other)
        self._check(other)
        result: dict[tuple[Key, ...], QRat] = {}
        for left, cl in self.terms.items():
            for right, cr in other.terms.items():
                partial: dict[tuple[Key, ...], QRat] = {(): cl * cr}
                for algebra, a, b in zip(self.factors, left, right, strict=True):
                    product = algebra.mul_basis(a, b)
                    partial = {
                        (*keys, key): c * pc
                        for keys, c in partial.items()
                        for key, pc in product.items()
                    }
                for keys, c in partial.items():
                    add_into(result, keys, c)
        return TensorElement(self.factors, result)

    def map_leg(
        self,
        index: int,
        fn: Callable[[Key], Element],
        target: Algebra | None = None,
    ) -> TensorElement:
        """Apply a linear map (given on basis keys) to one leg."""
        result: dict[tuple[Key, ...], QRat] = {}
        for keys, coeff in self.terms.items():
            image = fn(keys[index])
            if target is None:
                target = image.algebra
            for key, c in image.terms.items():
                add_into(result, (*keys[:index], key, *keys[index + 1 :]), coeff * c)
        factors = list(self.factors)
        if target is not None:
            factors[index] = target
        return TensorElement(tuple(factors), result)

    def expand_leg(
        self,
        index: int,
        fn: Callable[[Key], TensorElement],
        factors: tuple[Algebra, ...],
    ) -> TensorElement:
        """Replace one leg by a tensor (e.g. a coproduct), splicing its legs in place."""
        result: dict[tuple[Key, ...], QRat] = {}
        for keys, coeff in self.terms.items():
            image = fn(keys[index])
            for inner_keys, c in image.terms.items():
                add_into(result, (*keys[:index], *inner_keys, *keys[index + 1 :]), coeff * c)
        new_factors = (*self.factors[:index], *factors, *self.factors[index + 1 :])
        return TensorElement(new_factors, result)

    def contract(self, fn: Callable[[tuple[Key, ...]], Element | QRat]) -> Element | QRat:
        """Apply a multilinear map given on basis tuples and sum the results."""
        total: Element | QRat | None = None
        for keys, coeff in self.terms.items():
            value = fn(keys)
            term = value.scale(coeff) if isinstance(value, Element) else coeff * value
            total = term if total is None else total + term
        return QRat.zero() if total is None else total

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorElement):
            return NotImplemented
        return (
            len(self.factors) == len(other.factors)
            and all(a is b for a, b in zip(self.factors, other.factors, strict=True))
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((tuple(id(a) for a in self.factors), frozenset(self.terms.items())))

    def sorted_terms(self) -> list[tuple[tuple[Key, ...], QRat]]:
        def order(item: tuple[tuple[Key, ...], QRat]) -> Any:
            keys = item[0]
            return tuple(a.basis_sort_key(k) for a, k in zip(self.factors, keys, strict=True))

        return sorted(self.terms.items(), key=order)

    def __str__(self) -> str:
        return format_linear(
            (
                coeff,
                " ⊗ ".join(
                    f"({a.render_basis(k)})" for a, k in zip(self.factors, keys, strict=True)
                ),
            )
            for keys, coeff in self.sorted_terms()
        )

    def __repr__(self) -> str:
        return f"TensorElement({self})"
