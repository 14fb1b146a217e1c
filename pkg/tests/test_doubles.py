"""Tests for the quantum and Heisenberg doubles and their quotients."""

from itertools import product

import pytest

from qboson.algebra.elements import Element, TensorElement
from qboson.algebra.lattice import CartanData
from qboson.algebra.presentations import get_algebra
from qboson.algebra.scalars import QRat
from qboson.config import Settings
from qboson.duality.doubles import (
    PairAlgebra,
    TwistedProduct,
    bq_normal_form,
    heisenberg_double,
    quantum_double,
    uq_normal_form,
)
from qboson.duality.pairing import PairingSession
from qboson.errors import BrickError, TagMismatchError

q = QRat.q()


def _generators(double: PairAlgebra) -> list[Element]:
    """x_1 and the torus letter of each leg, embedded in the double."""
    first, second = double.first, double.second
    return [
        double.embed_first(first.generator(0)),
        double.embed_first(first.root_torus(0)),
        double.embed_second(second.generator(0)),
        double.embed_second(second.root_torus(0)),
    ]


class TestQuantumDouble:
    """Tests for D_phi(U~+, U~-)."""

    def test_cross_relation(self, quantum_session: PairingSession) -> None:
        """Test EF - FE = (1 (x) K' - K^-1 (x) 1)/(q - q^-1) before the quotient."""
        double = quantum_double(quantum_session)
        big_e = double.embed_first(double.first.generator(0))
        big_f = double.embed_second(double.second.generator(0))
        expected = (
            double.embed_second(double.second.root_torus(0))
            - double.embed_first(double.first.root_torus(0, -1))
        ).scale(QRat.one() / (q - q.inv()))
        assert big_e * big_f - big_f * big_e == expected

    def test_quotient_is_uq(self, quantum_session: PairingSession) -> None:
        """Test that identifying K' with K recovers the U_q commutator."""
        double = quantum_double(quantum_session)
        big_e = double.embed_first(double.first.generator(0))
        big_f = double.embed_second(double.second.generator(0))
        uq = get_algebra("uq", quantum_session.cartan)
        expected = (uq.root_torus(0) - uq.root_torus(0, -1)).scale(QRat.one() / (q - q.inv()))
        assert uq_normal_form(big_e * big_f - big_f * big_e) == expected

    def test_quotient_relations_a2(self, a2: CartanData, test_settings: Settings) -> None:
        """Test that E_1 and F_2 commute in the quotient for A2."""
        session = PairingSession(a2, "quantum", test_settings)
        double = quantum_double(session)
        big_e = double.embed_first(double.first.generator(0))
        big_f = double.embed_second(double.second.generator(1))
        assert uq_normal_form(big_e * big_f - big_f * big_e).is_zero()

    def test_coalgebra(self, quantum_session: PairingSession) -> None:
        """Test the tensor-product coproduct and counit."""
        double = quantum_double(quantum_session)
        big_e = double.embed_first(double.first.generator(0))
        k_inv = double.embed_first(double.first.root_torus(0, -1))
        expected = TensorElement.pure(big_e, k_inv) + TensorElement.pure(double.one(), big_e)
        assert double.delta(big_e) == expected
        assert double.counit(big_e) == 0
        assert double.counit(k_inv) == 1

    @pytest.mark.parametrize("family", ["quantum", "boson"])
    def test_associativity(self, a1: CartanData, test_settings: Settings, family: str) -> None:
        """Test (xy)z = x(yz) on every triple of generators."""
        double = quantum_double(PairingSession(a1, family, test_settings))  # type: ignore[arg-type]
        for x, y, z in product(_generators(double), repeat=3):
            assert (x * y) * z == x * (y * z)

    @pytest.mark.parametrize("family", ["quantum", "boson"])
    def test_coproduct_is_multiplicative(
        self, a1: CartanData, test_settings: Settings, family: str
    ) -> None:
        """Test Delta(xy) = Delta(x) Delta(y) on every pair of generators."""
        double = quantum_double(PairingSession(a1, family, test_settings))  # type: ignore[arg-type]
        for x, y in product(_generators(double), repeat=2):
            assert double.delta(x * y) == double.delta(x) * double.delta(y)

    def test_shared_instance(self, quantum_session: PairingSession) -> None:
        """Test that a session has one double."""
        assert quantum_double(quantum_session) is quantum_double(quantum_session)

    def test_from_quantum(self, boson_session: PairingSession) -> None:
        """Test F -> f and K -> t from U_q into the boson double."""
        double = quantum_double(boson_session)
        uq = get_algebra("uq", boson_session.cartan)
        assert double.from_quantum(uq.lower_generator(0)) == double.embed_second(
            double.second.generator(0)
        )
        assert double.from_quantum(uq.root_torus(0)) == double.embed_first(
            double.first.root_torus(0)
        )

    def test_from_quantum_errors(self, boson_session: PairingSession, quantum_session: PairingSession) -> None:
        """Test that conversion needs the boson family and a quantum source."""
        uq = get_algebra("uq", boson_session.cartan)
        with pytest.raises(BrickError):
            quantum_double(quantum_session).from_quantum(uq.lower_generator(0))
        wq = get_algebra("wq", boson_session.cartan)
        with pytest.raises(TagMismatchError):
            quantum_double(boson_session).from_quantum(wq.lower_generator(0))


class TestHeisenbergDouble:
    """Tests for H_phi(B+, B-)."""

    def test_boson_relation(self, boson_session: PairingSession) -> None:
        """Test e'f = 1 + q^-2 f e' in H_phi."""
        double = heisenberg_double(boson_session)
        e = double.embed_second(double.second.generator(0))
        f = double.embed_first(double.first.generator(0))
        assert e * f == double.one() + (f * e).scale(QRat.q_power(-2))

    def test_associativity(self, boson_session: PairingSession) -> None:
        """Test (xy)z = x(yz) on every triple of generators."""
        double = heisenberg_double(boson_session)
        for x, y, z in product(_generators(double), repeat=3):
            assert (x * y) * z == x * (y * z)

    def test_quotient_is_bq(self, boson_session: PairingSession) -> None:
        """Test that identifying t' with t recovers the B_q relation."""
        double = heisenberg_double(boson_session)
        e = double.embed_second(double.second.generator(0))
        f = double.embed_first(double.first.generator(0))
        bq = get_algebra("bq", boson_session.cartan)
        assert bq_normal_form(e * f - (f * e).scale(QRat.q_power(-2))) == bq.one()

    def test_rendering(self, boson_session: PairingSession) -> None:
        """Test that elements print with the smash-product separator."""
        double = heisenberg_double(boson_session)
        assert str(double.embed_first(double.first.generator(0))) == "(f1) ♯ (1)"

    def test_wrong_quotient(self, boson_session: PairingSession, quantum_session: PairingSession) -> None:
        """Test that each quotient accepts only its own double."""
        with pytest.raises(TagMismatchError):
            uq_normal_form(heisenberg_double(boson_session).one())
        with pytest.raises(TagMismatchError):
            bq_normal_form(quantum_double(quantum_session).one())

    def test_unknown_twist_mode(self, boson_session: PairingSession) -> None:
        """Test that only the bullet and circ products exist."""
        with pytest.raises(ValueError, match="twist mode"):
            TwistedProduct(boson_session, "star")
