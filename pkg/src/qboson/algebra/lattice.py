"""Cartan data, the weight lattice and the invariant bilinear form."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cache, cached_property
from math import lcm

from sympy import Matrix

from qboson.algebra.scalars import QRat
from qboson.errors import CartanError


@dataclass(frozen=True, order=True, slots=True)
class Weight:
    """A lattice element in fundamental-weight coordinates."""

    coords: tuple[int, ...]

    @classmethod
    def zero(cls, rank: int) -> Weight:
        return cls((0,) * rank)

    @classmethod
    def parse(cls, text: str) -> Weight:
        """Parse comma-separated coordinates such as ``"1,0"`` or ``"-2"``."""
        try:
            return cls(tuple(int(part) for part in text.split(",")))
        except ValueError as exc:
            raise CartanError(f"invalid weight {text!r}") from exc

    @property
    def rank(self) -> int:
        return len(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def _check(self, other: Weight) -> None:
        if len(self.coords) != len(other.coords):
            raise CartanError(f"rank mismatch between weights {self} and {other}")

    def __add__(self, other: Weight) -> Weight:
        self._check(other)
        return Weight(tuple(a + b for a, b in zip(self.coords, other.coords, strict=True)))

    def __sub__(self, other: Weight) -> Weight:
        self._check(other)
        return Weight(tuple(a - b for a, b in zip(self.coords, other.coords, strict=True)))

    def __neg__(self) -> Weight:
        return Weight(tuple(-a for a in self.coords))

    def __mul__(self, factor: int) -> Weight:
        return Weight(tuple(factor * a for a in self.coords))

    __rmul__ = __mul__

    def __str__(self) -> str:
        return ",".join(str(a) for a in self.coords)


@cache
def _form_value(
    form: tuple[tuple[Fraction, ...], ...], left: tuple[int, ...], right: tuple[int, ...]
) -> Fraction:
    return sum(
        (
            form[i][j] * left[i] * right[j]
            for i in range(len(left))
            if left[i]
            for j in range(len(right))
            if right[j]
        ),
        Fraction(0),
    )


@cache
def _q_form_value(
    form: tuple[tuple[Fraction, ...], ...],
    left: tuple[int, ...],
    right: tuple[int, ...],
    sign: int,
) -> QRat:
    return QRat.q_power(sign * _form_value(form, left, right))


@dataclass(frozen=True)
class CartanData:
    """A symmetrizable Cartan matrix with its symmetrizers.

    The form is (alpha_i, alpha_j) = d_i * a_ij. Simple roots in fundamental-weight
    coordinates are the columns of the Cartan matrix. Values of the form are memoized
    at module level, keyed by the weight form, so instances hold no mutable state.
    """

    cartan: tuple[tuple[int, ...], ...]
    symmetrizers: tuple[int, ...]
    name: str | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        n = len(self.cartan)
        if n == 0:
            raise CartanError("Cartan matrix must have rank at least 1")
        if any(len(row) != n for row in self.cartan):
            raise CartanError("Cartan matrix must be square")
        if len(self.symmetrizers) != n:
            raise CartanError(f"expected {n} symmetrizers, got {len(self.symmetrizers)}")
        if any(d <= 0 for d in self.symmetrizers):
            raise CartanError("symmetrizers must be positive")
        for i in range(n):
            if self.cartan[i][i] != 2:
                raise CartanError(f"diagonal entry a_{i + 1}{i + 1} must be 2")
            for j in range(n):
                if i == j:
                    continue
                a_ij, a_ji = self.cartan[i][j], self.cartan[j][i]
                if a_ij > 0:
                    raise CartanError(f"off-diagonal entry a_{i + 1}{j + 1}={a_ij} is positive")
                if (a_ij == 0) != (a_ji == 0):
                    raise CartanError(
                        f"a_{i + 1}{j + 1}={a_ij} and a_{j + 1}{i + 1}={a_ji} must vanish together"
                    )
                if self.symmetrizers[i] * a_ij != self.symmetrizers[j] * a_ji:
                    raise CartanError(
                        f"d_{i + 1}*a_{i + 1}{j + 1} != d_{j + 1}*a_{j + 1}{i + 1}: "
                        "the matrix is not symmetrized by the given d"
                    )
        if Matrix(self.cartan).det() == 0:
            raise CartanError("Cartan matrix must be invertible (finite type)")

    # --- Derived data ---

    @property
    def rank(self) -> int:
        return len(self.cartan)

    @cached_property
    def _inverse(self) -> tuple[tuple[Fraction, ...], ...]:
        inv = Matrix(self.cartan).inv()
        return tuple(
            tuple(Fraction(int(inv[i, j].p), int(inv[i, j].q)) for j in range(self.rank))
            for i in range(self.rank)
        )

    @cached_property
    def weight_form(self) -> tuple[tuple[Fraction, ...], ...]:
        """Matrix of (omega_i, omega_j) = diag(d) * A^-1."""
        return tuple(
            tuple(self.symmetrizers[i] * self._inverse[i][j] for j in range(self.rank))
            for i in range(self.rank)
        )

    @cached_property
    def exponent_denominator(self) -> int:
        """Least D with D*(lambda, mu) integral for all weights."""
        return lcm(*(entry.denominator for row in self.weight_form for entry in row))

    # --- Lattice operations ---

    def zero(self) -> Weight:
        return Weight.zero(self.rank)

    def simple_root(self, i: int) -> Weight:
        """alpha_i (0-based index) in fundamental-weight coordinates."""
        if not 0 <= i < self.rank:
            raise CartanError(f"simple root index {i + 1} outside rank {self.rank}")
        return Weight(tuple(self.cartan[k][i] for k in range(self.rank)))

    def fundamental_weight(self, i: int) -> Weight:
        if not 0 <= i < self.rank:
            raise CartanError(f"fundamental weight index {i + 1} outside rank {self.rank}")
        return Weight(tuple(int(k == i) for k in range(self.rank)))

    def root_weight(self, coefficients: tuple[int, ...] | list[int]) -> Weight:
        """Embed sum_i c_i alpha_i into the weight lattice."""
        if len(coefficients) != self.rank:
            raise CartanError(f"expected {self.rank} root coordinates")
        return Weight(
            tuple(
                sum(self.cartan[k][i] * c for i, c in enumerate(coefficients))
                for k in range(self.rank)
            )
        )

    def root_coordinates(self, weight: Weight) -> tuple[int, ...] | None:
        """Coordinates of a weight in the simple-root basis, or None if not in Q."""
        self._check_rank(weight)
        coords = []
        for i in range(self.rank):
            value = sum(
                (self._inverse[i][k] * weight.coords[k] for k in range(self.rank)), Fraction(0)
            )
            if value.denominator != 1:
                return None
            coords.append(value.numerator)
        return tuple(coords)

    def height(self, weight: Weight) -> int | None:
        coords = self.root_coordinates(weight)
        return None if coords is None else sum(coords)

    def is_nonnegative_root(self, weight: Weight) -> bool:
        """True when weight lies in Q+ (nonnegative integer root coordinates)."""
        coords = self.root_coordinates(weight)
        return coords is not None and all(c >= 0 for c in coords)

    def _check_rank(self, weight: Weight) -> None:
        if weight.rank != self.rank:
            raise CartanError(f"weight {weight} has rank {weight.rank}, expected {self.rank}")

    def inner(self, left: Weight, right: Weight) -> Fraction:
        """The symmetric bilinear form (left, right)."""
        self._check_rank(left)
        self._check_rank(right)
        return _form_value(self.weight_form, left.coords, right.coords)

    def q_inner(self, left: Weight, right: Weight, sign: int = 1) -> QRat:
        """q^(sign * (left, right))."""
        self._check_rank(left)
        self._check_rank(right)
        return _q_form_value(self.weight_form, left.coords, right.coords, sign)

    def q_i(self, i: int) -> QRat:
        """q_i = q^((alpha_i, alpha_i)/2) = q^(d_i)."""
        return QRat.q_power(self.symmetrizers[i])

    def __str__(self) -> str:
        if self.name:
            return self.name
        rows = ";".join(",".join(str(a) for a in row) for row in self.cartan)
        return f"Cartan[{rows}|{','.join(str(d) for d in self.symmetrizers)}]"


def inner(left: Weight, right: Weight, cartan: CartanData) -> Fraction:
    """(left, right) for weights over the given Cartan data."""
    return cartan.inner(left, right)


def validate_cartan(
    matrix: list[list[int]] | tuple[tuple[int, ...], ...],
    symmetrizers: list[int] | tuple[int, ...],
    name: str | None = None,
) -> CartanData:
    """Check the Cartan datum axioms and build CartanData.

    Raises:
        CartanError: with a message naming the violated axiom
    """
    try:
        cartan = tuple(tuple(int(a) for a in row) for row in matrix)
        sym = tuple(int(d) for d in symmetrizers)
    except (TypeError, ValueError) as exc:
        raise CartanError(f"Cartan data must be integers: {exc}") from exc
    return CartanData(cartan=cartan, symmetrizers=sym, name=name)


PRESETS: dict[str, tuple[tuple[tuple[int, ...], ...], tuple[int, ...]]] = {
    "A1": (((2,),), (1,)),
    "A2": (((2, -1), (-1, 2)), (1, 1)),
    "B2": (((2, -1), (-2, 2)), (2, 1)),
    "G2": (((2, -1), (-3, 2)), (3, 1)),
}


def cartan_preset(name: str) -> CartanData:
    """Look up a named Cartan preset (A1, A2, B2, G2)."""
    key = name.upper()
    if key not in PRESETS:
        raise CartanError(f"unknown Cartan preset {name!r}; choose from {', '.join(PRESETS)}")
    matrix, symmetrizers = PRESETS[key]
    return validate_cartan(matrix, symmetrizers, name=key)
