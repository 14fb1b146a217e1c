"""Tests for exact scalars and q-combinatorics."""

import operator
from fractions import Fraction
from typing import Any

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from qboson.algebra.scalars import QRat, q_binom, q_fact, q_int, q_number_identity_checks
from qboson.errors import DivisionByZeroError, EvaluationError, ParseError, ScalarError

q = QRat.q()

laurent = st.dictionaries(
    st.integers(min_value=-4, max_value=4),
    st.integers(min_value=-5, max_value=5).filter(bool),
    max_size=4,
)


def _laurent(terms: dict[int, int]) -> QRat:
    total = QRat.zero()
    for exponent, coeff in terms.items():
        total += QRat.q_power(exponent) * coeff
    return total


OPERATORS = {"+": operator.add, "-": operator.sub, "*": operator.mul, "/": operator.truediv}


def _extend(children: st.SearchStrategy[Any]) -> st.SearchStrategy[Any]:
    return st.tuples(st.sampled_from(sorted(OPERATORS)), children, children)


scalar_trees = st.recursive(laurent.map(lambda terms: ("leaf", terms)), _extend, max_leaves=6)
points = st.fractions(min_value=-3, max_value=3, max_denominator=5).filter(bool)


def _symbolic(tree: Any) -> QRat | None:
    """Build the tree with QRat arithmetic; None when it divides by zero."""
    if tree[0] == "leaf":
        return _laurent(tree[1])
    op, left, right = tree
    x, y = _symbolic(left), _symbolic(right)
    if x is None or y is None or (op == "/" and not y):
        return None
    return OPERATORS[op](x, y)


def _numeric(tree: Any, point: Fraction) -> Fraction | None:
    """Evaluate the tree with Fraction arithmetic at q = point; None at a pole."""
    if tree[0] == "leaf":
        return sum((coeff * point**exponent for exponent, coeff in tree[1].items()), Fraction(0))
    op, left, right = tree
    x, y = _numeric(left, point), _numeric(right, point)
    if x is None or y is None or (op == "/" and not y):
        return None
    return OPERATORS[op](x, y)


class TestQRat:
    """Tests for QRat arithmetic and normalization."""

    def test_structural_equality_is_mathematical(self) -> None:
        """Test that equal rational functions compare equal after reduction."""
        left = (q**2 - 1) / (q - 1)
        assert left == q + 1
        assert hash(left) == hash(q + 1)

    def test_half_powers_reduce(self) -> None:
        """Test that q^(1/2) squared is q and lives back in Q(q)."""
        root = QRat.q_power(Fraction(1, 2))
        assert root.denominator_root == 2
        assert root * root == q
        assert (root * root).denominator_root == 1

    def test_division_by_zero(self) -> None:
        """Test that dividing by zero raises a ZeroDivisionError subclass."""
        with pytest.raises(DivisionByZeroError):
            _ = q / QRat.zero()
        with pytest.raises(ZeroDivisionError):
            QRat.zero().inv()

    def test_coerce_rejects_floats(self) -> None:
        """Test that floats are not silently accepted."""
        with pytest.raises(ScalarError):
            QRat.coerce(0.5)  # type: ignore[arg-type]

    def test_evaluate(self) -> None:
        """Test exact evaluation at rational q."""
        assert (q + q.inv()).evaluate(2) == Fraction(5, 2)
        assert QRat.q_power(Fraction(1, 2)).evaluate(Fraction(9, 4)) == Fraction(3, 2)

    def test_evaluate_at_pole(self) -> None:
        """Test that evaluating at a pole raises ScalarError."""
        with pytest.raises(ScalarError):
            (QRat.one() / (q - 1)).evaluate(1)

    def test_evaluate_irrational_root(self) -> None:
        """Test that q^(1/2) at q=2 has no rational value."""
        with pytest.raises(ScalarError):
            QRat.q_power(Fraction(1, 2)).evaluate(2)

    @settings(deadline=None)
    @given(laurent, laurent, laurent)
    def test_field_axioms(self, a: dict[int, int], b: dict[int, int], c: dict[int, int]) -> None:
        """Test distributivity and commutativity on random Laurent polynomials."""
        x, y, z = _laurent(a), _laurent(b), _laurent(c)
        assert (x + y) * z == x * z + y * z
        assert x * y == y * x
        if y:
            assert (x / y) * y == x

    @settings(deadline=None, max_examples=100)
    @given(scalar_trees, st.lists(points, min_size=3, max_size=3))
    def test_evaluate_agrees_with_arithmetic(self, tree: Any, values: list[Fraction]) -> None:
        """Test that evaluating a symbolic result matches Fraction arithmetic at three rational q."""
        result = _symbolic(tree)
        assume(result is not None)
        assert result is not None
        for value in values:
            expected = _numeric(tree, value)
            if expected is not None:
                assert result.evaluate(value) == expected


class TestPrinting:
    """Tests for the scalar grammar."""

    def test_laurent_printing(self) -> None:
        """Test the canonical Laurent form, highest power first."""
        assert str(1 + QRat.q_power(-2)) == "1 + q^-2"
        assert str(2 * q**3 - q + 5) == "2*q^3 - q + 5"
        assert str(-q) == "-q"
        assert str(QRat.zero()) == "0"

    def test_fractional_printing(self) -> None:
        """Test that fractional exponents print as q^(a/D)."""
        value = QRat.q_power(Fraction(1, 2)) + QRat.q_power(Fraction(-1, 2))
        assert str(value) == "q^(1/2) + q^(-1/2)"

    def test_parse(self) -> None:
        """Test parsing scalar text."""
        assert QRat.parse("1 - q^-2") == 1 - QRat.q_power(-2)
        assert QRat.parse("(q - q^-1)/(q - 1)") == (q - q.inv()) / (q - 1)
        assert QRat.parse("q^(1/2) * q^(1/2)") == q

    def test_parse_rejects_generators(self) -> None:
        """Test that generator letters are not scalars."""
        with pytest.raises(EvaluationError):
            QRat.parse("E1")

    def test_parse_error_position(self) -> None:
        """Test that a parse error reports its column."""
        with pytest.raises(ParseError) as info:
            QRat.parse("1 + $")
        assert info.value.column == 5

    @settings(deadline=None)
    @given(laurent)
    def test_print_parse_round_trip(self, terms: dict[int, int]) -> None:
        """Test that printed Laurent polynomials parse back to themselves."""
        value = _laurent(terms)
        assert QRat.parse(str(value)) == value


class TestQNumbers:
    """Tests for q-integers, q-factorials and Gaussian binomials."""

    def test_q_int(self) -> None:
        """Test small quantum integers."""
        assert q_int(0) == 0
        assert q_int(2) == q + q.inv()
        assert str(q_int(3)) == "q^2 + 1 + q^-2"
        assert q_int(-2) == -q_int(2)

    def test_q_int_step(self) -> None:
        """Test quantum integers in base q^2."""
        assert q_int(2, step=2) == q**2 + QRat.q_power(-2)

    def test_q_fact(self) -> None:
        """Test [3]! = [2][3]."""
        assert q_fact(0) == 1
        assert q_fact(3) == q_int(2) * q_int(3)

    def test_q_fact_negative(self) -> None:
        """Test that negative factorials raise."""
        with pytest.raises(ScalarError):
            q_fact(-1)

    def test_q_binom(self) -> None:
        """Test Gaussian binomials."""
        assert q_binom(4, 0) == 1
        assert q_binom(4, 1) == q_int(4)
        assert q_binom(4, 2) == q**4 + q**2 + 2 + QRat.q_power(-2) + QRat.q_power(-4)

    def test_q_binom_range(self) -> None:
        """Test that k outside 0..n raises."""
        with pytest.raises(ScalarError):
            q_binom(3, 4)

    def test_identity_checks(self) -> None:
        """Test the Pascal, symmetry and alternating-sum identities up to n=12."""
        outcome = q_number_identity_checks(12)
        assert outcome == {"pascal": True, "symmetry": True, "alternating_sum": True}
