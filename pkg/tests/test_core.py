"""Tests for the QBoson facade."""

from pathlib import Path

import pytest

from qboson import QBoson
from qboson.algebra.lattice import Weight
from qboson.algebra.scalars import QRat
from qboson.config import Settings


@pytest.fixture
def qb(test_settings: Settings) -> QBoson:
    return QBoson("A1", test_settings)


class TestQBoson:
    """Tests for the high-level API."""

    def test_pair_from_text(self, qb: QBoson) -> None:
        """Test the pairing on expression text."""
        assert qb.pair("e1^2", "f1^2") == QRat.one() + QRat.q_power(-2)

    def test_pair_elements(self, qb: QBoson) -> None:
        e = qb.brick("uq+").generator(0)
        f = qb.brick("uq-").generator(0)
        assert qb.pair(e, f) == (QRat.q().inv() - QRat.q()).inv()

    def test_sessions_are_shared(self, qb: QBoson) -> None:
        assert qb.session("boson") is qb.session("boson")
        assert qb.action() is qb.action("boson")

    def test_act_on_brick(self, qb: QBoson) -> None:
        """Test that the unit acts trivially."""
        action = qb.action()
        f = action.negative.generator(0)
        assert qb.act(action.positive.one(), f) == f

    def test_delta_needs_brick(self, qb: QBoson) -> None:
        with pytest.raises(TypeError):
            qb.delta(qb.algebra("wq").one())

    def test_highest_weight_module(self, qb: QBoson) -> None:
        module = qb.highest_weight_module("2")
        assert module.multiplicities() == {Weight((2,)): 1}
        assert qb.decompose(module, depth=2).verified

    def test_decompose_file(self, qb: QBoson, scrambled_module_path: Path, test_settings: Settings) -> None:
        """Test that decompose_file writes its report below decomposition_path."""
        result = qb.decompose_file(scrambled_module_path)
        assert result.multiplicities == {Weight((2,)): 1, Weight((0,)): 1}
        assert (test_settings.decomposition_path / "h2_plus_h0_scrambled.json").is_file()

    def test_verify(self, qb: QBoson) -> None:
        reports = qb.verify(["hopf-axioms"], max_degree=2)
        assert [report.suite for report in reports] == ["hopf-axioms"]
        assert reports[0].all_passed
