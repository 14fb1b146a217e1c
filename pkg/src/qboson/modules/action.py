"""Schrödinger representations of D_phi, the diagonal action on H_phi and the YD braiding.

On A (the positive brick):  (a (x) 1).x = sum a_1 x S(a_2),   (1 (x) b).x = sum phi(x_1, S(b)) x_2
On B (the negative brick):  (a (x) 1).y = sum phi(a, y_1) y_2, (1 (x) b).y = sum b_1 y S(b_2)
On H_phi:                   (a (x) b).(b' # a') = sum (a_1 (x) b_1).b' # (a_2 (x) b_2).a'
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

from loguru import logger

from qboson.algebra.elements import Element, Key, Monomial, TensorElement, add_into
from qboson.algebra.presentations import get_algebra
from qboson.algebra.scalars import QRat
from qboson.duality.doubles import (
    QuantumDouble,
    bq_normal_form,
    heisenberg_double,
    quantum_double,
)
from qboson.errors import BrickError, TagMismatchError

if TYPE_CHECKING:
    from qboson.duality.pairing import PairingSession

BasisAction = dict[Key, QRat]


@dataclass(frozen=True)
class YDVector:
    """An element of H_phi together with its comodule expansion sum v_(-1) (x) v_(0)."""

    vector: Element
    coaction: TensorElement


class SchrodingerAction:
    """Actions of the quantum double of a session on its bricks, on H_phi and on W_q."""

    def __init__(self, session: PairingSession) -> None:
        self.session = session
        self.cartan = session.cartan
        self.positive = session.positive
        self.negative = session.negative
        self.double = quantum_double(session)
        self.heisenberg = heisenberg_double(session)
        self._memo: dict[tuple[str, Monomial, Monomial], BasisAction] = {}

    # --- Basis-level actions ---

    def _cached(self, kind: str, u: Monomial, x: Monomial) -> BasisAction | None:
        return self._memo.get((kind, u, x))

    def _store(self, kind: str, u: Monomial, x: Monomial, value: BasisAction) -> BasisAction:
        if self.session.settings.memoize:
            self._memo[(kind, u, x)] = value
        return value

    def _upper_on_positive(self, a: Monomial, x: Monomial) -> BasisAction:
        """sum a_1 x S(a_2)"""
        cached = self._cached("A+", a, x)
        if cached is not None:
            return cached
        brick = self.positive
        result: BasisAction = {}
        for (a1, a2), coeff in brick.delta_monomial(a).items():
            s_a2 = brick.antipode_monomial(a2)  # type: ignore[arg-type]
            for k1, c1 in brick.mul_basis(a1, x).items():
                for k2, c2 in s_a2.terms.items():
                    for key, c in brick.mul_basis(k1, k2).items():
                        add_into(result, key, coeff * c1 * c2 * c)
        return self._store("A+", a, x, result)

    def _lower_on_positive(self, b: Monomial, x: Monomial) -> BasisAction:
        """sum phi(x_1, S(b)) x_2"""
        cached = self._cached("B+", b, x)
        if cached is not None:
            return cached
        s_b = self.negative.antipode_monomial(b)
        result: BasisAction = {}
        for (x1, x2), coeff in self.positive.delta_monomial(x).items():
            value = QRat.zero()
            for k, c in s_b.terms.items():
                value += c * self.session.pair_monomials(x1, k)  # type: ignore[arg-type]
            if value:
                add_into(result, x2, coeff * value)
        return self._store("B+", b, x, result)

    def _upper_on_negative(self, a: Monomial, y: Monomial) -> BasisAction:
        """sum phi(a, y_1) y_2"""
        cached = self._cached("A-", a, y)
        if cached is not None:
            return cached
        result: BasisAction = {}
        for (y1, y2), coeff in self.negative.delta_monomial(y).items():
            value = self.session.pair_monomials(a, y1)  # type: ignore[arg-type]
            if value:
                add_into(result, y2, coeff * value)
        return self._store("A-", a, y, result)

    def _lower_on_negative(self, b: Monomial, y: Monomial) -> BasisAction:
        """sum b_1 y S(b_2)"""
        cached = self._cached("B-", b, y)
        if cached is not None:
            return cached
        brick = self.negative
        result: BasisAction = {}
        for (b1, b2), coeff in brick.delta_monomial(b).items():
            s_b2 = brick.antipode_monomial(b2)  # type: ignore[arg-type]
            for k1, c1 in brick.mul_basis(b1, y).items():
                for k2, c2 in s_b2.terms.items():
                    for key, c in brick.mul_basis(k1, k2).items():
                        add_into(result, key, coeff * c1 * c2 * c)
        return self._store("B-", b, y, result)

    def act_basis(
        self, key: tuple[Monomial, Monomial], x: Monomial, on_positive: bool
    ) -> BasisAction:
        """(a (x) b).x = (a (x) 1).((1 (x) b).x) on one basis monomial."""
        a, b = key
        lower = self._lower_on_positive if on_positive else self._lower_on_negative
        upper = self._upper_on_positive if on_positive else self._upper_on_negative
        result: BasisAction = {}
        for mid, c1 in lower(b, x).items():
            for out, c2 in upper(a, mid).items():  # type: ignore[arg-type]
                add_into(result, out, c1 * c2)
        return result

    # --- Element-level actions ---

    def as_double(self, u: Element) -> Element:
        """Lift u into this session's quantum double."""
        if u.algebra is self.double:
            return u
        if u.algebra is self.positive:
            return self.double.embed_first(u)
        if u.algebra is self.negative:
            return self.double.embed_second(u)
        if self.session.family == "boson" and (
            u.algebra.tag in ("uq", "uq+", "uq-")
            or (isinstance(u.algebra, QuantumDouble) and u.algebra.session.family == "quantum")
        ):
            return self.double.from_quantum(u)
        raise TagMismatchError(self.double.tag, u.algebra.tag)

    def act(self, u: Element, x: Element) -> Element:
        """Schrödinger action of u on x in the positive or the negative brick."""
        u = self.as_double(u)
        if x.algebra is self.positive:
            on_positive = True
        elif x.algebra is self.negative:
            on_positive = False
        else:
            raise BrickError(
                f"Schrödinger action needs {self.positive.tag} or {self.negative.tag}, "
                f"got {x.algebra.tag}"
            )
        result: BasisAction = {}
        for ku, cu in u.terms.items():
            for kx, cx in x.terms.items():
                for key, c in self.act_basis(ku, kx, on_positive).items():  # type: ignore[arg-type]
                    add_into(result, key, cu * cx * c)
        return x.algebra.element(result)

    def act_on_heisenberg(self, u: Element, z: Element) -> Element:
        """Diagonal action of D_phi on H_phi."""
        u = self.as_double(u)
        self.heisenberg.check(z)
        result: BasisAction = {}
        for (h1, h2), cu in self.double.delta(u).terms.items():
            for (b, a), cz in z.terms.items():  # type: ignore[misc]
                left = self.act_basis(h1, b, on_positive=False)  # type: ignore[arg-type]
                if not left:
                    continue
                right = self.act_basis(h2, a, on_positive=True)  # type: ignore[arg-type]
                for kb, c1 in left.items():
                    for ka, c2 in right.items():
                        add_into(result, (kb, ka), cu * cz * c1 * c2)
        return self.heisenberg.element(result)

    # --- W_q inside H_phi ---

    def _wq(self) -> Element:
        return get_algebra("wq", self.cartan, self.session.settings.memoize).one()

    def lift_wq(self, w: Element) -> Element:
        """f-word e-word in W_q -> f-word # e-word in H_phi."""
        wq = self._wq().algebra
        if w.algebra is self.heisenberg:
            return w
        if w.algebra is self.positive:
            return self.heisenberg.embed_second(w)
        if w.algebra is self.negative:
            return self.heisenberg.embed_first(w)
        if w.algebra is not wq:
            raise TagMismatchError("wq", w.algebra.tag)
        zero = self.cartan.zero()
        terms: BasisAction = {}
        for mono, coeff in w.terms.items():
            key = (Monomial(mono.lower, (), zero), Monomial((), mono.upper, zero))  # type: ignore[attr-defined]
            add_into(terms, key, coeff)
        return self.heisenberg.element(terms)

    def lower_wq(self, z: Element) -> Element:
        """H_phi -> B_q -> W_q; the image must be torus-free."""
        image = bq_normal_form(z)
        wq = self._wq().algebra
        if any(not mono.torus.is_zero() for mono in image.terms):  # type: ignore[attr-defined]
            raise BrickError(f"{image} does not lie in W_q")
        return wq.element(image.terms)

    def uq_act_on_wq(self, u: Element, w: Element) -> Element:
        """The U_q-module algebra structure of W_q, through the diagonal action on H_phi."""
        if self.session.family != "boson":
            raise BrickError("W_q actions need a boson pairing session")
        result = self.act_on_heisenberg(u, self.lift_wq(w))
        return self.lower_wq(result)

    # --- Coaction and Yetter-Drinfel'd structure ---

    def coaction(self, z: Element) -> TensorElement:
        """delta(b # a) = sum ((1 (x) b_1)(a_1 (x) 1)) (x) (b_2 # a_2), legs (D_phi, H_phi)."""
        z = self.lift_wq(z)
        double = self.double
        result: dict[tuple[Key, ...], QRat] = {}
        for (b, a), coeff in z.terms.items():  # type: ignore[misc]
            for (b1, b2), cb in self.negative.delta_monomial(b).items():
                left_b = double.basis_element((self.positive.unit_key(), b1))
                for (a1, a2), ca in self.positive.delta_monomial(a).items():
                    left = left_b * double.basis_element((a1, self.negative.unit_key()))
                    for key, c in left.terms.items():
                        add_into(result, (key, (b2, a2)), coeff * cb * ca * c)
        return TensorElement((double, self.heisenberg), result)

    def yd_vector(self, z: Element) -> YDVector:
        z = self.lift_wq(z)
        return YDVector(z, self.coaction(z))

    def yd_check(self, h: Element, v: Element) -> bool:
        """sum h_1 v_(-1) (x) h_2.v_(0) == sum (h_1.v)_(-1) h_2 (x) (h_1.v)_(0)."""
        h = self.as_double(h)
        v = self.lift_wq(v)
        double = self.double
        left = TensorElement.zero((double, self.heisenberg))
        right = TensorElement.zero((double, self.heisenberg))
        coaction_v = self.coaction(v)
        for (h1, h2), ch in double.delta(h).terms.items():
            for (v_minus, v_zero), cv in coaction_v.terms.items():
                product = double.basis_element(h1) * double.basis_element(v_minus)
                acted = self.act_on_heisenberg(
                    double.basis_element(h2), self.heisenberg.basis_element(v_zero)
                )
                left = left + TensorElement.pure(product, acted).scale(ch * cv)
            moved = self.act_on_heisenberg(double.basis_element(h1), v)
            for (w_minus, w_zero), cw in self.coaction(moved).terms.items():
                product = double.basis_element(w_minus) * double.basis_element(h2)
                right = right + TensorElement.pure(
                    product, self.heisenberg.basis_element(w_zero)
                ).scale(ch * cw)
        return left == right

    def braiding(self, v: Element, w: Element) -> TensorElement:
        """sigma(v (x) w) = sum v_(-1).w (x) v_(0).

        W_q inputs give a W_q (x) W_q tensor; anything else stays in H_phi (x) H_phi.
        """
        in_wq = v.algebra.tag == "wq" and w.algebra.tag == "wq"
        w_lifted = self.lift_wq(w)
        result = TensorElement.zero((self.heisenberg, self.heisenberg))
        for (v_minus, v_zero), coeff in self.coaction(v).terms.items():
            moved = self.act_on_heisenberg(self.double.basis_element(v_minus), w_lifted)
            result = result + TensorElement.pure(
                moved, self.heisenberg.basis_element(v_zero)
            ).scale(coeff)
        if not in_wq:
            return result
        wq = self._wq().algebra

        def lower(key: Key) -> Element:
            return self.lower_wq(self.heisenberg.basis_element(key))

        return result.map_leg(0, lower, wq).map_leg(1, lower, wq)

    def braid_legs(self, tensor: TensorElement, index: int) -> TensorElement:
        """Apply sigma to legs (index, index + 1) of a tensor of W_q elements."""
        if not 0 <= index < tensor.degree - 1:
            raise ValueError(f"no legs {index}, {index + 1} in a {tensor.degree}-fold tensor")
        result: dict[tuple[Key, ...], QRat] = {}
        factors = tensor.factors
        for keys, coeff in tensor.terms.items():
            v = factors[index].basis_element(keys[index])
            w = factors[index + 1].basis_element(keys[index + 1])
            for pair, c in self.braiding(v, w).terms.items():
                add_into(result, (*keys[:index], *pair, *keys[index + 2 :]), coeff * c)
        return TensorElement(factors, result)

    # --- Braided Weyl product ---

    def _swap(self, a: Monomial, b: Monomial) -> BasisAction:
        """sigma(a (x) b) for a in B^{++} and b in B^{--}, keyed by (b'', a'')."""
        cached = self._cached("sigma", a, b)
        if cached is not None:
            return cached
        unit_a, unit_b = self.positive.unit_key(), self.negative.unit_key()
        swapped = self.braiding(self.positive.basis_element(a), self.negative.basis_element(b))
        result: BasisAction = {}
        for ((kb, ka), (lb, la)), coeff in swapped.terms.items():  # type: ignore[misc]
            if ka != unit_a or lb != unit_b:
                raise BrickError("braiding of bq++ (x) bq-- left bq-- (x) bq++")
            add_into(result, (kb, la), coeff)
        return self._store("sigma", a, b, result)

    def braided_weyl_mul(self, x: TensorElement, y: TensorElement) -> TensorElement:
        """(m (x) m)(id (x) sigma (x) id) on B^{--} (x) B^{++} (x) B^{--} (x) B^{++}."""
        factors = (self.negative, self.positive)
        for t in (x, y):
            if t.factors != factors:
                raise TagMismatchError("bq--⊗bq++", "⊗".join(f.tag for f in t.factors))
        result: dict[tuple[Key, ...], QRat] = {}
        for (b, a), cx in x.terms.items():
            for (b2, a2), cy in y.terms.items():
                for (kb, ka), cs in self._swap(a, b2).items():  # type: ignore[misc]
                    for left, c1 in self.negative.mul_basis(b, kb).items():
                        for right, c2 in self.positive.mul_basis(ka, a2).items():
                            add_into(result, (left, right), cx * cy * cs * c1 * c2)
        return TensorElement(factors, result)

    def weyl_iso(self, x: TensorElement) -> Element:
        """f-word (x) e-word -> f-word e-word in W_q."""
        wq = self._wq().algebra
        terms: BasisAction = {}
        for (b, a), coeff in x.terms.items():
            if not (b.torus.is_zero() and a.torus.is_zero()):  # type: ignore[attr-defined]
                raise BrickError("weyl_iso is defined on torus-free tensors")
            add_into(terms, Monomial(b.lower, a.upper, self.cartan.zero()), coeff)  # type: ignore[attr-defined]
        logger.debug(f"weyl_iso mapped {len(x.terms)} tensors")
        return wq.element(terms)
