"""Tests for the braided Hopf structure on bq--."""

import pytest

from qboson.algebra.braided import BraidedBrick
from qboson.algebra.elements import TensorElement
from qboson.algebra.lattice import CartanData
from qboson.algebra.presentations import get_brick
from qboson.algebra.scalars import QRat, q_binom
from qboson.errors import BrickError


@pytest.fixture
def braided(a1: CartanData) -> BraidedBrick:
    return BraidedBrick(get_brick("bq-", a1))


class TestBraidedBrick:
    """Tests for Delta_0 and the braided antipode."""

    @pytest.mark.parametrize("n", range(1, 7))
    def test_delta0_closed_form(self, braided: BraidedBrick, n: int) -> None:
        """Test Delta_0(f^n) = sum_p [n, p] q^(p^2 - np) f^p (x) f^(n-p)."""
        f = braided.brick.generator(0)
        expected = TensorElement.zero((braided.brick, braided.brick))
        for p in range(n + 1):
            coeff = q_binom(n, p) * QRat.q_power(p * p - n * p)
            expected = expected + TensorElement.pure((f**p).scale(coeff), f ** (n - p))
        assert braided.delta0(f**n) == expected

    @pytest.mark.parametrize("n", range(1, 7))
    def test_antipode_closed_form(self, braided: BraidedBrick, n: int) -> None:
        """Test S(f^n) = (-1)^n q^(-n(n-1)) f^n."""
        f = braided.brick.generator(0)
        coeff = QRat.q_power(-n * (n - 1))
        expected = (f**n).scale(-coeff if n % 2 else coeff)
        assert braided.antipode(f**n) == expected

    def test_delta0_printing(self, braided: BraidedBrick) -> None:
        """Test the printed form of Delta_0(f^2)."""
        f = braided.brick.generator(0)
        assert str(braided.delta0(f**2)) == "(f1^2) ⊗ (1) + (1 + q^-2) * (f1) ⊗ (f1) + (1) ⊗ (f1^2)"

    def test_delta0_is_braided_multiplicative(self, a2: CartanData) -> None:
        """Test Delta_0(xy) = Delta_0(x) Delta_0(y) in the braided tensor square."""
        braided = BraidedBrick(get_brick("bq-", a2))
        f1, f2 = braided.brick.generator(0), braided.brick.generator(1)
        for x, y in [(f1, f2), (f2, f1 * f1), (f1 * f2, f2)]:
            assert braided.delta0(x * y) == braided.tensor_mul(braided.delta0(x), braided.delta0(y))

    def test_antipode_is_convolution_inverse(self, a2: CartanData) -> None:
        """Test m (S (x) id) Delta_0 = epsilon on mixed words."""
        braided = BraidedBrick(get_brick("bq-", a2))
        brick = braided.brick
        x = brick.generator(0) * brick.generator(1) * brick.generator(0)
        total = braided.delta0(x).contract(
            lambda k: braided.antipode(brick.basis_element(k[0])) * brick.basis_element(k[1])
        )
        assert total == brick.zero()

    def test_rejects_torus(self, braided: BraidedBrick) -> None:
        """Test that torus letters are outside bq--."""
        with pytest.raises(BrickError):
            braided.delta0(braided.brick.root_torus(0))

    def test_rejects_positive_brick(self, a1: CartanData) -> None:
        """Test that the braided structure lives on the negative boson brick only."""
        with pytest.raises(BrickError):
            BraidedBrick(get_brick("bq+", a1))
