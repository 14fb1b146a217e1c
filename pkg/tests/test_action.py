"""Tests for the Schrödinger actions, the Yetter-Drinfel'd structure and the cocycle twist."""

from itertools import product

import pytest

from qboson.algebra.elements import Element, TensorElement
from qboson.algebra.lattice import CartanData
from qboson.algebra.presentations import get_algebra
from qboson.algebra.scalars import QRat
from qboson.duality.doubles import cocycle_twist
from qboson.duality.pairing import PairingSession
from qboson.errors import BrickError, TagMismatchError
from qboson.modules.action import SchrodingerAction
from qboson.validation.suites import sl2_closed_form

q = QRat.q()


def _double_generators(action: SchrodingerAction) -> list[Element]:
    double = action.double
    return [
        double.embed_first(action.positive.generator(0)),
        double.embed_first(action.positive.root_torus(0)),
        double.embed_second(action.negative.generator(0)),
        double.embed_second(action.negative.root_torus(0)),
    ]


def _weyl_tensors(action: SchrodingerAction) -> list[TensorElement]:
    """f^i (x) e'^j with 0 < i + j <= 2."""
    negative, positive = action.negative, action.positive
    f, e = negative.generator(0), positive.generator(0)
    return [
        TensorElement.pure(f**i, e**j)
        for i in range(3)
        for j in range(3)
        if 0 < i + j <= 2
    ]


def _smash_product(action: SchrodingerAction, x: TensorElement, y: TensorElement) -> TensorElement:
    """sum phi(a_1, b'_1) b b'_2 (x) a_2 a', written out from the coproducts."""
    negative, positive, session = action.negative, action.positive, action.session
    result = TensorElement.zero((negative, positive))
    for (b, a), cx in x.terms.items():
        for (b2, a2), cy in y.terms.items():
            for (a_1, a_2), ca in positive.delta_monomial(a).items():
                for (y_1, y_2), cb in negative.delta_monomial(b2).items():
                    value = session.pair_monomials(a_1, y_1)
                    if not value:
                        continue
                    left = negative.basis_element(b) * negative.basis_element(y_2)
                    right = positive.basis_element(a_2) * positive.basis_element(a2)
                    result = result + TensorElement.pure(left, right).scale(cx * cy * ca * cb * value)
    return result


class TestSchrodingerAction:
    """Tests for D_phi acting on its bricks and on H_phi."""

    def test_action_is_multiplicative(self, boson_action: SchrodingerAction) -> None:
        """Test (xy).v = x.(y.v) on generator pairs and a quadratic word."""
        positive = boson_action.positive
        v = positive.generator(0) ** 2
        generators = _double_generators(boson_action)
        for x, y in product(generators, repeat=2):
            assert boson_action.act(x * y, v) == boson_action.act(x, boson_action.act(y, v))

    def test_unit_acts_trivially(self, boson_action: SchrodingerAction) -> None:
        """Test 1.v = v on both bricks."""
        one = boson_action.double.one()
        f = boson_action.negative.generator(0)
        assert boson_action.act(one, f * f) == f * f

    def test_obstruction(self, boson_action: SchrodingerAction, a1: CartanData) -> None:
        """Test E.t = (1 - q^2) e t^2 and E.t' = 0, so the action does not descend to B_q."""
        heisenberg, positive, negative = (
            boson_action.heisenberg,
            boson_action.positive,
            boson_action.negative,
        )
        big_e = get_algebra("uq", a1).upper_generator(0)
        e = (positive.root_torus(0, -1) * positive.generator(0)).scale(QRat.one() / (q.inv() - q))
        expected = heisenberg.embed_second((e * positive.root_torus(0, 2)).scale(1 - q**2))
        t = heisenberg.embed_second(positive.root_torus(0))
        t_prime = heisenberg.embed_first(negative.root_torus(0))
        assert boson_action.act_on_heisenberg(big_e, t) == expected
        assert boson_action.act_on_heisenberg(big_e, t_prime).is_zero()

    @pytest.mark.parametrize(
        ("family", "n"),
        [(family, n) for family in ("E.e", "E.f", "F.e", "F.f") for n in (1, 2, 3)],
    )
    def test_sl2_closed_forms(
        self, boson_action: SchrodingerAction, a1: CartanData, family: str, n: int
    ) -> None:
        """Test repeated U_q actions on e'^n and f^n against their closed forms."""
        uq = get_algebra("uq", a1)
        wq = get_algebra("wq", a1)
        acting = uq.upper_generator(0) if family[0] == "E" else uq.lower_generator(0)
        value = wq.upper_generator(0) ** n if family[-1] == "e" else wq.lower_generator(0) ** n
        for m in range(1, n + 1):
            value = boson_action.uq_act_on_wq(acting, value)
            assert value == sl2_closed_form(family, m, n, wq)

    def test_wq_is_module_algebra(self, boson_action: SchrodingerAction, a1: CartanData) -> None:
        """Test u.(xy) = sum (u_1.x)(u_2.y) for u = E, F, K on generators of W_q."""
        uq = get_algebra("uq", a1)
        wq = get_algebra("wq", a1)
        double = boson_action.double
        targets = [wq.upper_generator(0), wq.lower_generator(0)]
        for u in (uq.upper_generator(0), uq.lower_generator(0), uq.root_torus(0)):
            split = double.delta(boson_action.as_double(u))
            for x, y in product(targets, repeat=2):
                rhs = wq.zero()
                for (h1, h2), coeff in split.terms.items():
                    left = boson_action.uq_act_on_wq(double.basis_element(h1), x)
                    right = boson_action.uq_act_on_wq(double.basis_element(h2), y)
                    rhs = rhs + (left * right).scale(coeff)
                assert boson_action.uq_act_on_wq(u, x * y) == rhs

    def test_brick_required(self, boson_action: SchrodingerAction, a1: CartanData) -> None:
        """Test that the Schrödinger action refuses targets outside the bricks."""
        with pytest.raises(BrickError):
            boson_action.act(boson_action.double.one(), get_algebra("wq", a1).one())

    def test_wq_action_needs_boson_session(self, quantum_session: PairingSession, a1: CartanData) -> None:
        """Test that W_q actions are only defined through the boson pairing."""
        action = SchrodingerAction(quantum_session)
        wq = get_algebra("wq", a1)
        with pytest.raises(BrickError):
            action.uq_act_on_wq(action.double.one(), wq.upper_generator(0))

    def test_lift_rejects_other_algebras(self, boson_action: SchrodingerAction, a1: CartanData) -> None:
        """Test that only W_q, the bricks and H_phi lift into H_phi."""
        with pytest.raises(TagMismatchError):
            boson_action.lift_wq(get_algebra("bq", a1).one())


class TestYetterDrinfeld:
    """Tests for the coaction, the YD condition and the braiding on W_q."""

    def test_coaction_counit(self, boson_action: SchrodingerAction, a1: CartanData) -> None:
        """Test (eps (x) id) delta = id on the generators of W_q."""
        wq = get_algebra("wq", a1)
        double, heisenberg = boson_action.double, boson_action.heisenberg
        for v in (wq.upper_generator(0), wq.lower_generator(0)):
            collapsed = boson_action.coaction(v).contract(
                lambda k: heisenberg.basis_element(k[1], double.counit(double.basis_element(k[0])))
            )
            assert collapsed == boson_action.lift_wq(v)

    def test_yd_vector(self, boson_action: SchrodingerAction, a1: CartanData) -> None:
        """Test that e' carries the two-term coaction from Delta(e')."""
        e = get_algebra("wq", a1).upper_generator(0)
        v = boson_action.yd_vector(e)
        assert v.vector == boson_action.lift_wq(e)
        assert len(v.coaction.terms) == 2

    def test_yd_compatibility(self, boson_action: SchrodingerAction, a1: CartanData) -> None:
        """Test the Yetter-Drinfel'd condition for every generator pair of D_phi and W_q."""
        wq = get_algebra("wq", a1)
        for h in _double_generators(boson_action):
            for v in (wq.upper_generator(0), wq.lower_generator(0)):
                assert boson_action.yd_check(h, v)

    def test_braiding_stays_in_wq(self, boson_action: SchrodingerAction, a1: CartanData) -> None:
        """Test that sigma of two W_q elements is a W_q (x) W_q tensor."""
        wq = get_algebra("wq", a1)
        braided = boson_action.braiding(wq.upper_generator(0), wq.lower_generator(0))
        assert braided.factors == (wq, wq)
        assert not braided.is_zero()

    @pytest.mark.slow
    def test_braid_relation(self, boson_action: SchrodingerAction, a1: CartanData) -> None:
        """Test the braid relation on generator triples of W_q."""
        wq = get_algebra("wq", a1)
        generators = [wq.upper_generator(0), wq.lower_generator(0)]
        for u, v, w in product(generators, repeat=3):
            tensor = TensorElement.pure(u, v, w)
            left = boson_action.braid_legs(
                boson_action.braid_legs(boson_action.braid_legs(tensor, 0), 1), 0
            )
            right = boson_action.braid_legs(
                boson_action.braid_legs(boson_action.braid_legs(tensor, 1), 0), 1
            )
            assert left == right

    def test_braid_legs_range(self, boson_action: SchrodingerAction, a1: CartanData) -> None:
        """Test that braid_legs needs two adjacent legs."""
        wq = get_algebra("wq", a1)
        tensor = TensorElement.pure(wq.upper_generator(0), wq.lower_generator(0))
        with pytest.raises(ValueError, match="no legs"):
            boson_action.braid_legs(tensor, 1)

    def test_braided_weyl_product(self, boson_action: SchrodingerAction, a1: CartanData) -> None:
        """Test that the braided product on B-- (x) B++ is the product of W_q."""
        wq = get_algebra("wq", a1)
        negative, positive = boson_action.negative, boson_action.positive
        x = TensorElement.pure(negative.one(), positive.generator(0))
        y = TensorElement.pure(negative.generator(0), positive.generator(0))
        combined = boson_action.weyl_iso(boson_action.braided_weyl_mul(x, y))
        assert combined == boson_action.weyl_iso(x) * boson_action.weyl_iso(y)
        assert str(combined) == "q^-2 * f1*e1^2 + e1"

    def test_braided_product_matches_smash_formula(self, boson_action: SchrodingerAction) -> None:
        """Test the sigma-built product against sum b (a_1.b') (x) a_2 a' and against W_q."""
        tensors = _weyl_tensors(boson_action)
        for x, y in product(tensors, repeat=2):
            braided = boson_action.braided_weyl_mul(x, y)
            assert braided == _smash_product(boson_action, x, y)
            assert boson_action.weyl_iso(braided) == (
                boson_action.weyl_iso(x) * boson_action.weyl_iso(y)
            )

    def test_braided_product_of_generators(self, boson_action: SchrodingerAction) -> None:
        """Test (1 (x) e')(f (x) 1) = 1 (x) 1 + q^-2 f (x) e'."""
        negative, positive = boson_action.negative, boson_action.positive
        e, f = positive.generator(0), negative.generator(0)
        x = TensorElement.pure(negative.one(), e)
        y = TensorElement.pure(f, positive.one())
        expected = TensorElement.pure(negative.one(), positive.one()) + TensorElement.pure(
            f, e
        ).scale(QRat.q_power(-2))
        assert boson_action.braided_weyl_mul(x, y) == expected

    def test_braided_product_needs_bricks(self, boson_action: SchrodingerAction, a1: CartanData) -> None:
        """Test that the braided product only accepts bq-- (x) bq++ tensors."""
        wq = get_algebra("wq", a1)
        x = TensorElement.pure(wq.lower_generator(0), wq.upper_generator(0))
        with pytest.raises(TagMismatchError):
            boson_action.braided_weyl_mul(x, x)

    def test_weyl_iso_rejects_torus(self, boson_action: SchrodingerAction) -> None:
        """Test that the isomorphism is defined on torus-free tensors only."""
        negative, positive = boson_action.negative, boson_action.positive
        with pytest.raises(BrickError):
            boson_action.weyl_iso(TensorElement.pure(negative.root_torus(0), positive.one()))


class TestCocycleTwist:
    """Tests for the twisted products relating D_phi to H_phi."""

    def test_twist_is_multiplicative(self, boson_action: SchrodingerAction) -> None:
        """Test psi(xy) = psi(x) . psi(y) on generators of D_phi."""
        twist = cocycle_twist(boson_action.session)
        generators = _double_generators(boson_action)
        for x, y in product(generators, repeat=2):
            assert twist.to_twisted(x * y) == twist.bullet_mul(
                twist.to_twisted(x), twist.to_twisted(y)
            )

    def test_convolution_inverse(self, boson_action: SchrodingerAction) -> None:
        """Test sigma^-1 * sigma = eps (x) eps on twisted generators."""
        twist = cocycle_twist(boson_action.session)
        images = [twist.to_twisted(x) for x in _double_generators(boson_action)]
        for hx, hy in product(images, repeat=2):
            expected = twist.bullet.counit(hx) * twist.bullet.counit(hy)
            assert twist.convolution(hx, hy) == expected

    def test_miyashita_ulbrich_action(self, boson_action: SchrodingerAction) -> None:
        """Test that the twisted action agrees with the diagonal action on H_phi."""
        twist = cocycle_twist(boson_action.session)
        heisenberg = boson_action.heisenberg
        targets = [
            heisenberg.embed_first(boson_action.negative.generator(0)),
            heisenberg.embed_second(boson_action.positive.generator(0)),
        ]
        for x, z in product(_double_generators(boson_action), targets):
            lhs = twist.mu_action(x, twist.from_heisenberg(z))
            rhs = twist.from_heisenberg(boson_action.act_on_heisenberg(x, z))
            assert lhs == rhs

    def test_circ_product_is_heisenberg(self, boson_action: SchrodingerAction) -> None:
        """Test that the circ product matches H_phi under b # a -> b (x) a."""
        twist = cocycle_twist(boson_action.session)
        heisenberg = boson_action.heisenberg
        generators = [
            heisenberg.embed_first(boson_action.negative.generator(0)),
            heisenberg.embed_first(boson_action.negative.root_torus(0)),
            heisenberg.embed_second(boson_action.positive.generator(0)),
            heisenberg.embed_second(boson_action.positive.root_torus(0)),
        ]
        for z, w in product(generators, repeat=2):
            expected = twist.from_heisenberg(z * w)
            assert twist.circ_mul(twist.from_heisenberg(z), twist.from_heisenberg(w)) == expected

    def test_sigma_values(self, boson_action: SchrodingerAction) -> None:
        """Test sigma(1 (x) e', f (x) 1) = 1 and its convolution inverse -q^2."""
        twist = cocycle_twist(boson_action.session)
        negative, positive = boson_action.negative, boson_action.positive
        x = twist.bullet.pure(negative.one(), positive.generator(0))
        y = twist.bullet.pure(negative.generator(0), positive.one())
        assert twist.sigma(x, y) == QRat.one()
        assert twist.sigma_inv(x, y) == -QRat.q_power(2)
