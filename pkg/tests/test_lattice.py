"""Tests for Cartan data and the weight lattice."""

from fractions import Fraction

import pytest

from qboson.algebra.lattice import PRESETS, CartanData, Weight, cartan_preset, validate_cartan
from qboson.algebra.scalars import QRat
from qboson.errors import CartanError


class TestWeight:
    """Tests for Weight arithmetic and parsing."""

    def test_parse_and_format(self) -> None:
        """Test that weights parse from and print to comma-separated coordinates."""
        weight = Weight.parse("1,-2")
        assert weight.coords == (1, -2)
        assert str(weight) == "1,-2"

    def test_parse_invalid(self) -> None:
        """Test that non-integer coordinates raise CartanError."""
        with pytest.raises(CartanError):
            Weight.parse("1,x")

    def test_arithmetic(self) -> None:
        """Test addition, negation and scaling."""
        a, b = Weight((1, 0)), Weight((0, 2))
        assert a + b == Weight((1, 2))
        assert -(a - b) == Weight((-1, 2))
        assert 3 * a == Weight((3, 0))

    def test_rank_mismatch(self) -> None:
        """Test that weights of different rank do not add."""
        with pytest.raises(CartanError):
            _ = Weight((1,)) + Weight((1, 0))


class TestCartanData:
    """Tests for Cartan datum validation and the invariant form."""

    @pytest.mark.parametrize("name", sorted(PRESETS))
    def test_form_on_simple_roots(self, name: str) -> None:
        """Test that (alpha_i, alpha_j) = d_i a_ij for every preset."""
        cartan = cartan_preset(name)
        for i in range(cartan.rank):
            for j in range(cartan.rank):
                expected = cartan.symmetrizers[i] * cartan.cartan[i][j]
                assert cartan.inner(cartan.simple_root(i), cartan.simple_root(j)) == expected

    @pytest.mark.parametrize("name", sorted(PRESETS))
    def test_roots_against_fundamental_weights(self, name: str) -> None:
        """Test that (alpha_i, omega_j) = d_i delta_ij."""
        cartan = cartan_preset(name)
        for i in range(cartan.rank):
            for j in range(cartan.rank):
                value = cartan.inner(cartan.simple_root(i), cartan.fundamental_weight(j))
                assert value == (cartan.symmetrizers[i] if i == j else 0)

    def test_form_memo_keeps_instances_immutable(self, a2: CartanData) -> None:
        """Test that evaluating the form stores no mutable state on the Cartan datum."""
        alpha, omega = a2.simple_root(0), a2.fundamental_weight(1)
        assert a2.q_inner(alpha, omega) == QRat.q_power(a2.inner(alpha, omega))
        assert a2.q_inner(alpha, alpha, sign=-1) == QRat.q_power(-2)
        assert not any(isinstance(value, dict | list | set) for value in vars(a2).values())
        with pytest.raises(AttributeError):
            a2.symmetrizers = (2, 2)  # type: ignore[misc]

    def test_root_coordinates(self, a2: CartanData) -> None:
        """Test the inverse embedding of the root lattice."""
        weight = a2.simple_root(0) * 2 + a2.simple_root(1)
        assert a2.root_coordinates(weight) == (2, 1)
        assert a2.height(weight) == 3
        assert a2.is_nonnegative_root(weight)
        assert not a2.is_nonnegative_root(a2.simple_root(0) - a2.simple_root(1))

    def test_fundamental_weight_outside_root_lattice(self, a2: CartanData) -> None:
        """Test that omega_1 of A2 has no integral root coordinates."""
        assert a2.root_coordinates(a2.fundamental_weight(0)) is None

    def test_weight_form_denominator(self, a2: CartanData) -> None:
        """Test that A2 pairings of weights need q^(1/3)."""
        assert a2.inner(a2.fundamental_weight(0), a2.fundamental_weight(0)) == Fraction(2, 3)
        assert a2.exponent_denominator == 3

    def test_q_inner(self, a1: CartanData) -> None:
        """Test q^((alpha, alpha)) and its inverse."""
        alpha = a1.simple_root(0)
        assert a1.q_inner(alpha, alpha) == QRat.q_power(2)
        assert a1.q_inner(alpha, alpha, sign=-1) == QRat.q_power(-2)

    def test_q_i(self) -> None:
        """Test that q_i = q^(d_i)."""
        b2 = cartan_preset("B2")
        assert b2.q_i(0) == QRat.q_power(2)
        assert b2.q_i(1) == QRat.q()

    def test_preset_lookup_is_case_insensitive(self) -> None:
        """Test that a2 and A2 name the same data."""
        assert cartan_preset("a2") == cartan_preset("A2")

    def test_unknown_preset(self) -> None:
        """Test that unknown presets raise CartanError."""
        with pytest.raises(CartanError, match="unknown Cartan preset"):
            cartan_preset("E9")

    @pytest.mark.parametrize(
        ("matrix", "symmetrizers", "message"),
        [
            ([[2, -1], [-1, 2]], [1], "symmetrizers"),
            ([[3]], [1], "diagonal"),
            ([[2, 1], [1, 2]], [1, 1], "positive"),
            ([[2, -1], [0, 2]], [1, 1], "vanish together"),
            ([[2, -1], [-2, 2]], [1, 1], "not symmetrized"),
            ([[2, -2], [-2, 2]], [1, 1], "invertible"),
        ],
    )
    def test_axiom_violations(
        self, matrix: list[list[int]], symmetrizers: list[int], message: str
    ) -> None:
        """Test that each violated axiom is named in the error."""
        with pytest.raises(CartanError, match=message):
            validate_cartan(matrix, symmetrizers)
