"""Tests for category O of the q-Boson algebra: projector, coaction and decomposition."""

from pathlib import Path
from typing import Any

import pytest

from qboson.algebra.lattice import CartanData, Weight
from qboson.algebra.presentations import get_algebra
from qboson.algebra.scalars import QRat
from qboson.config import Settings
from qboson.errors import ModuleFormatError, NotInCategoryError, RelationError, TruncationError
from qboson.modules.category_o import (
    RawModule,
    StandardModule,
    character_check,
    decompose,
    freeness_check,
    scrambled_direct_sum,
)
from qboson.modules.io import module_from_data, read_module


@pytest.fixture
def h2(a1: CartanData, test_settings: Settings) -> StandardModule:
    """H(2) over sl2."""
    return StandardModule.highest_weight(a1, Weight((2,)), test_settings)


def _bad_module() -> dict[str, Any]:
    """e'f - q^-2 fe' acts as 2 on weight 0."""
    return {
        "cartan": [[2]],
        "symmetrizers": [1],
        "spaces": {"0": 1, "-2": 1},
        "actions": {
            "e1": [{"from": "-2", "to": "0", "matrix": [["2"]]}],
            "f1": [{"from": "0", "to": "-2", "matrix": [["1"]]}],
        },
    }


class TestStandardModule:
    """Tests for windows of B_q-- (x) V."""

    def test_window(self, h2: StandardModule) -> None:
        """Test the depth-2 window below weight 2."""
        raw = h2.to_raw(2)
        assert raw.weights == [Weight((2,)), Weight((0,)), Weight((-2,))]
        assert raw.character() == {Weight((2,)): 1, Weight((0,)): 1, Weight((-2,)): 1}

    def test_raising_a_lowered_vector(self, h2: StandardModule) -> None:
        """Test e'.(f v) = v."""
        raw = h2.to_raw(2)
        f = h2.session.negative.generator(0)
        assert raw.apply_generator("e", 0, h2.vector(f, 0, 2)) == h2.seed_vector(0, 2)

    def test_vector_below_window(self, h2: StandardModule) -> None:
        """Test that f^3 v does not fit a depth-2 window."""
        f = h2.session.negative.generator(0)
        with pytest.raises(TruncationError):
            h2.vector(f**3, 0, 2)

    def test_f_leaves_window(self, h2: StandardModule) -> None:
        """Test that f on the bottom weight reports the truncation."""
        raw = h2.to_raw(2)
        f = h2.session.negative.generator(0)
        bottom = h2.vector(f * f, 0, 2)
        with pytest.raises(TruncationError):
            raw.apply_generator("f", 0, bottom)

    def test_freeness(self, h2: StandardModule) -> None:
        """Test that b -> b.v is injective modulo the radical."""
        assert freeness_check(h2, 2)

    def test_multiplicities(self, a1: CartanData, test_settings: Settings) -> None:
        """Test that every seed contributes one H(lambda)."""
        module = StandardModule(a1, [Weight((1,)), Weight((1,)), Weight((-3,))], settings=test_settings)
        assert module.multiplicities() == {Weight((1,)): 2, Weight((-3,)): 1}

    def test_maximal_basis(self, h2: StandardModule) -> None:
        """Test that v spans the maximal vectors of H(2)."""
        assert h2.to_raw(2).maximal_basis() == [h2.seed_vector(0, 2)]

    def test_torus_seed_recovered(self, a1: CartanData, test_settings: Settings) -> None:
        """Test that decompose recovers a non-semisimple U_q^0 seed from K(M)."""
        q = QRat.q()
        seed = [[q, QRat.one()], [QRat.zero(), q]]
        module = StandardModule.from_torus(a1, [seed], test_settings)
        result = decompose(module, depth=1)
        assert result.multiplicities == {a1.zero(): 2}
        assert result.verified
        assert result.torus_seed[(0, a1.zero())] == seed

    def test_label_count(self, a1: CartanData) -> None:
        """Test that labels must match the seeds."""
        with pytest.raises(ModuleFormatError):
            StandardModule(a1, [Weight((0,))], labels=["a", "b"])


class TestProjector:
    """Tests for the extremal projector and the comodule map."""

    def test_projector_on_h2(self, h2: StandardModule) -> None:
        """Test P(v) = v and P(f^n v) = 0."""
        raw = h2.to_raw(2)
        f = h2.session.negative.generator(0)
        v = h2.seed_vector(0, 2)
        assert raw.project(v) == v
        assert raw.project(h2.vector(f, 0, 2)).is_zero()
        assert raw.project(h2.vector(f * f, 0, 2)).is_zero()

    def test_projector_is_idempotent(self, h2: StandardModule) -> None:
        """Test that P(m) is maximal and P(P(m)) = P(m) on a mixed vector."""
        raw = h2.to_raw(2)
        m = raw.vector(Weight((0,)), [QRat.q_power(3) - 2])
        image = raw.project(m)
        assert raw.project(image) == image
        assert raw.apply_generator("e", 0, image).is_zero()

    def test_rho_counit(self, h2: StandardModule) -> None:
        """Test that collapsing rho(m) with the counit gives m back."""
        raw = h2.to_raw(2)
        f = h2.session.negative.generator(0)
        m = h2.vector(f, 0, 2)
        assert raw.rho(m).counit() == m

    @pytest.mark.parametrize("form", ["braided", "pi"])
    def test_comodule_compatibility(self, h2: StandardModule, form: str) -> None:
        """Test rho(f.m) against Delta_0(f) rho(m) and the pi form."""
        raw = h2.to_raw(2)
        f = h2.session.negative.generator(0)
        m = h2.vector(f, 0, 2)
        assert raw.compatibility_check(f, m, form)

    def test_coaction_law(self, h2: StandardModule) -> None:
        """Test (Delta_0 (x) id) rho = (id (x) rho) rho on every vector of degree <= 4."""
        raw = h2.to_raw(4)
        f = h2.session.negative.generator(0)
        for n in range(5):
            assert raw.coaction_law_check(h2.vector(f**n, 0, 4))
        mixed = h2.vector(f, 0, 4) + h2.vector(f**3, 0, 4).scale(QRat.q_power(2) - 1)
        assert raw.coaction_law_check(mixed)

    def test_coinvariants_are_killed_by_raising_words(
        self, scrambled_module_path: Path, test_settings: Settings
    ) -> None:
        """Test that coinvariants have rho(m) = 1 (x) m and vanish under every e'-word of degree <= 4."""
        raw = read_module(scrambled_module_path, test_settings)
        positive, negative = raw.session.positive, raw.session.negative
        coinvariants = raw.maximal_basis()
        assert len(coinvariants) == 2
        for m in coinvariants:
            assert all(f_key == negative.unit_key() for f_key, _ in raw.rho(m).terms)
            for n in range(1, 5):
                word = positive.basis_element(positive.word((0,) * n))
                assert raw.act(word, m).is_zero()
                assert raw.act(word.scale(QRat.q()) + positive.generator(0) ** 2, m).is_zero()

    def test_unknown_compatibility_form(self, h2: StandardModule) -> None:
        raw = h2.to_raw(2)
        f = h2.session.negative.generator(0)
        with pytest.raises(ValueError, match="compatibility form"):
            raw.compatibility_check(f, h2.seed_vector(0, 2), "twisted")

    def test_weyl_elements_act(self, h2: StandardModule, a1: CartanData) -> None:
        """Test that W_q elements act through their B_q normal form."""
        raw = h2.to_raw(2)
        wq = get_algebra("wq", a1)
        e, f = wq.upper_generator(0), wq.lower_generator(0)
        v = h2.seed_vector(0, 2)
        assert raw.act(e * f, v) == v


class TestDecomposition:
    """Tests for the decomposition into highest-weight modules."""

    def test_highest_weight_module(self, h2: StandardModule) -> None:
        """Test that H(2) is indecomposable with one maximal vector."""
        result = decompose(h2, depth=2)
        assert result.multiplicities == {Weight((2,)): 1}
        assert result.verified

    def test_scrambled_file(self, scrambled_module_path: Path, test_settings: Settings) -> None:
        """Test that the scrambled H(2) + H(0) splits back into its summands."""
        module = read_module(scrambled_module_path, test_settings)
        result = decompose(module)
        assert result.multiplicities == {Weight((2,)): 1, Weight((0,)): 1}
        assert result.verified
        assert character_check(result)
        assert result.summary() == "{2: 1, 0: 1} (verified)"

    def test_scrambled_direct_sum(self, a1: CartanData, test_settings: Settings) -> None:
        """Test decomposition of a randomly re-based direct sum."""
        h2 = StandardModule.highest_weight(a1, Weight((2,)), test_settings).to_raw(2)
        h0 = StandardModule.highest_weight(a1, Weight((0,)), test_settings).to_raw(1)
        for seed in (0, 7):
            module = scrambled_direct_sum([h2, h0], seed)
            result = decompose(module)
            assert result.multiplicities == {Weight((2,)): 1, Weight((0,)): 1}
            assert result.verified

    @pytest.mark.slow
    def test_two_seeds_in_rank_two(self, a2: CartanData, test_settings: Settings) -> None:
        """Test an A2 module with seeds at 0 and omega_1."""
        module = StandardModule(a2, [a2.zero(), a2.fundamental_weight(0)], settings=test_settings)
        result = decompose(module, depth=1)
        assert result.multiplicities == module.multiplicities()
        assert result.verified


class TestRelations:
    """Tests for module validation."""

    def test_relation_error(self, test_settings: Settings) -> None:
        """Test that a broken boson relation names the relation and the weight."""
        module = module_from_data(_bad_module(), test_settings)
        with pytest.raises(RelationError) as info:
            module.validate()
        assert info.value.weight == "0"

    def test_nilpotence_cap(self, a1: CartanData) -> None:
        """Test that e'-words longer than the cap raise NotInCategoryError."""
        settings = Settings(nilpotence_cap=1)
        raw = StandardModule.highest_weight(a1, Weight((2,)), settings).to_raw(2)
        with pytest.raises(NotInCategoryError):
            raw.validate()

    def test_nilpotence_degree(self, h2: StandardModule) -> None:
        """Test that e'^3 kills the depth-2 window of H(2)."""
        assert h2.to_raw(2).validate() == 3

    @pytest.mark.parametrize(
        ("patch", "message"),
        [
            ({"actions": {"g1": []}}, "unknown generator"),
            ({"actions": {"e1": [{"from": "-2", "to": "-2", "matrix": [["1"]]}]}}, "must land"),
            ({"actions": {"e1": [{"from": "-2", "to": "0", "matrix": [["1", "2"]]}]}}, "expected a 1x1"),
            ({"actions": {"t1": [{"from": "0", "to": "0", "matrix": [["1"]]}]}}, "torus-matrices"),
            ({"spaces": {"0,1": 1}}, "rank"),
            ({"colour": "red"}, "invalid module file"),
        ],
    )
    def test_format_errors(self, patch: dict[str, Any], message: str) -> None:
        """Test that malformed module documents raise ModuleFormatError."""
        data = {**_bad_module(), **patch}
        with pytest.raises(ModuleFormatError, match=message):
            module_from_data(data)

    def test_direct_sum_needs_same_cartan(self, h2: StandardModule, a2: CartanData) -> None:
        other = RawModule(a2, {a2.zero(): 1})
        with pytest.raises(ModuleFormatError):
            h2.to_raw(2).direct_sum(other)
