"""Quantum double D_phi, Heisenberg double H_phi, their quotients and the cocycle twist.

D_phi(A, B) is A (x) B with
    (a (x) b)(a' (x) b') = sum phi(S^-1(a'_1), b_1) phi(a'_3, b_3) a a'_2 (x) b_2 b'
and H_phi(A, B) is B (x) A with
    (b # a)(b' # a') = sum phi(a_1, b'_1) b b'_2 # a_2 a'.
"""

from __future__ import annotations

from functools import cache
from typing import TYPE_CHECKING

from loguru import logger

from qboson.algebra.elements import Algebra, Element, Key, Monomial, TensorElement, add_into
from qboson.algebra.presentations import get_algebra
from qboson.algebra.scalars import QRat
from qboson.errors import BrickError, TagMismatchError

if TYPE_CHECKING:
    from qboson.algebra.lattice import Weight
    from qboson.algebra.presentations import HopfBrick, PresentedAlgebra
    from qboson.duality.pairing import PairingSession

# Elements of a double are plain Elements whose keys are (Monomial, Monomial) pairs.
DoubleElement = Element
PairKey = tuple[Monomial, Monomial]


class PairAlgebra(Algebra):
    """Vector space first (x) second with keys (first monomial, second monomial)."""

    separator = "⊗"

    def __init__(
        self,
        tag: str,
        session: PairingSession,
        first: HopfBrick,
        second: HopfBrick,
    ) -> None:
        super().__init__(tag, session.cartan, session.settings.memoize)
        self.session = session
        self.first = first
        self.second = second
        self._triples: dict[tuple[int, Monomial], dict[tuple[Key, ...], QRat]] = {}

    # --- Basis interface ---

    def unit_key(self) -> PairKey:
        return (self.first.unit_key(), self.second.unit_key())

    def basis_weight(self, key: Key) -> Weight:
        left, right = key  # type: ignore[misc]
        return self.first.basis_weight(left) + self.second.basis_weight(right)

    def basis_degree(self, key: Key) -> int:
        left, right = key  # type: ignore[misc]
        return int(left.degree + right.degree)

    def render_basis(self, key: Key) -> str:
        left, right = key  # type: ignore[misc]
        return (
            f"({self.first.render_basis(left)}) {self.separator} "
            f"({self.second.render_basis(right)})"
        )

    # --- Construction ---

    def pure(self, x: Element, y: Element) -> Element:
        """x (x) y as an element of this algebra."""
        self.first.check(x)
        self.second.check(y)
        terms: dict[Key, QRat] = {}
        for kx, cx in x.terms.items():
            for ky, cy in y.terms.items():
                add_into(terms, (kx, ky), cx * cy)
        return self.element(terms)

    def embed_first(self, x: Element) -> Element:
        return self.pure(x, self.second.one())

    def embed_second(self, y: Element) -> Element:
        return self.pure(self.first.one(), y)

    # --- Tensor-product coalgebra ---

    def delta(self, z: Element) -> TensorElement:
        """Delta(x (x) y) = sum (x_1 (x) y_1) (x) (x_2 (x) y_2)."""
        self.check(z)
        result: dict[tuple[Key, ...], QRat] = {}
        for (kx, ky), coeff in z.terms.items():  # type: ignore[misc]
            for (x1, x2), cx in self.first.delta_monomial(kx).items():
                for (y1, y2), cy in self.second.delta_monomial(ky).items():
                    add_into(result, ((x1, y1), (x2, y2)), coeff * cx * cy)
        return TensorElement((self, self), result)

    def counit(self, z: Element) -> QRat:
        self.check(z)
        total = QRat.zero()
        for (kx, ky), coeff in z.terms.items():  # type: ignore[misc]
            total += coeff * self.first.counit_basis(kx) * self.second.counit_basis(ky)
        return total

    def _delta3(self, leg: int, mono: Monomial) -> dict[tuple[Key, ...], QRat]:
        key = (leg, mono)
        cached = self._triples.get(key)
        if cached is None:
            brick = self.first if leg == 0 else self.second
            cached = brick.delta_iter(brick.basis_element(mono), 3).terms
            self._triples[key] = cached
        return cached


class QuantumDouble(PairAlgebra):
    """D_phi(A, B) over the two bricks of a pairing session."""

    def __init__(self, session: PairingSession) -> None:
        super().__init__(
            f"D[{session.positive.tag},{session.negative.tag}]",
            session,
            session.positive,
            session.negative,
        )

    def _mul_basis(self, left: Key, right: Key) -> dict[Key, QRat]:
        a, b = left  # type: ignore[misc]
        a2, b2 = right  # type: ignore[misc]
        positive, negative = self.first, self.second
        pair = self.session.pair_monomials
        result: dict[Key, QRat] = {}
        for (x1, x2, x3), ca in self._delta3(0, a2).items():
            s_inv = positive.antipode_monomial(x1, inverse=True)  # type: ignore[arg-type]
            for (y1, y2, y3), cb in self._delta3(1, b).items():
                right_value = pair(x3, y3)  # type: ignore[arg-type]
                if not right_value:
                    continue
                left_value = QRat.zero()
                for k, c in s_inv.terms.items():
                    value = pair(k, y1)  # type: ignore[arg-type]
                    if value:
                        left_value += c * value
                if not left_value:
                    continue
                coeff = ca * cb * left_value * right_value
                for ka, c1 in positive.mul_basis(a, x2).items():
                    for kb, c2 in negative.mul_basis(y2, b2).items():
                        add_into(result, (ka, kb), coeff * c1 * c2)
        return result

    # --- Conversion from the quantum presentation ---

    def from_quantum(self, x: Element) -> Element:
        """Image of an element of U_q, its bricks or the quantum double in this boson double.

        E_i -> t_i^-1 e'_i / (q_i^-1 - q_i), F_i -> f_i, K_lambda -> t_lambda,
        K'_lambda -> t'_lambda.
        """
        if self.session.family != "boson":
            raise BrickError("conversion targets the boson double")
        tag = x.algebra.tag
        if tag == "uq":
            return x.map_terms(lambda key: self._convert_uq(key), self)  # type: ignore[arg-type]
        if tag == "uq+":
            return x.map_terms(lambda key: self._convert_upper(key), self)  # type: ignore[arg-type]
        if tag == "uq-":
            return x.map_terms(lambda key: self._convert_lower(key), self)  # type: ignore[arg-type]
        if isinstance(x.algebra, QuantumDouble) and x.algebra.session.family == "quantum":
            return x.map_terms(
                lambda key: self._convert_upper(key[0]) * self._convert_lower(key[1]),  # type: ignore[index]
                self,
            )
        raise TagMismatchError("uq", tag)

    def _convert_upper(self, mono: Monomial) -> Element:
        positive = self.first
        result = self.one()
        for i in mono.upper:
            q_i = self.cartan.q_i(i)
            image = positive.root_torus(i, -1) * positive.generator(i)
            result = result * self.embed_first(image.scale(QRat.one() / (q_i.inv() - q_i)))
        if not mono.torus.is_zero():
            result = result * self.embed_first(positive.torus_element(mono.torus))
        return result

    def _convert_lower(self, mono: Monomial) -> Element:
        negative = self.second
        return self.embed_second(negative.basis_element(Monomial(mono.lower, (), mono.torus)))

    def _convert_uq(self, mono: Monomial) -> Element:
        lower = self._convert_lower(Monomial(mono.lower, (), self.cartan.zero()))
        upper = self._convert_upper(Monomial((), mono.upper, mono.torus))
        return lower * upper


class HeisenbergDouble(PairAlgebra):
    """H_phi(A, B) on B # A."""

    separator = "♯"

    def __init__(self, session: PairingSession) -> None:
        super().__init__(
            f"H[{session.positive.tag},{session.negative.tag}]",
            session,
            session.negative,
            session.positive,
        )

    def _mul_basis(self, left: Key, right: Key) -> dict[Key, QRat]:
        b, a = left  # type: ignore[misc]
        b2, a2 = right  # type: ignore[misc]
        negative, positive = self.first, self.second
        result: dict[Key, QRat] = {}
        for (x1, x2), ca in positive.delta_monomial(a).items():
            for (y1, y2), cb in negative.delta_monomial(b2).items():
                value = self.session.pair_monomials(x1, y1)  # type: ignore[arg-type]
                if not value:
                    continue
                coeff = ca * cb * value
                for kb, c1 in negative.mul_basis(b, y2).items():
                    for ka, c2 in positive.mul_basis(x2, a2).items():
                        add_into(result, (kb, ka), coeff * c1 * c2)
        return result


# --- Quotients ---


def _identify(algebra: PresentedAlgebra, first: Monomial, second: Monomial) -> Element:
    """Product first * second in a crossed algebra; primed torus letters become unprimed."""
    return algebra.basis_element(first) * algebra.basis_element(second)


def uq_normal_form(z: Element) -> Element:
    """U_q = D_phi(U~+, U~-)/(K_lambda - K'_lambda), as an element of the uq algebra."""
    double = z.algebra
    if not isinstance(double, QuantumDouble) or double.session.family != "quantum":
        raise TagMismatchError("D[uq+,uq-]", double.tag)
    uq = get_algebra("uq", double.cartan, double.memoize)
    return z.map_terms(lambda key: _identify(uq, key[0], key[1]), uq)  # type: ignore[index]


def bq_normal_form(z: Element) -> Element:
    """B_q = H_phi(B+, B-)/(t_lambda - t'_lambda), as an element of the bq algebra."""
    double = z.algebra
    if not isinstance(double, HeisenbergDouble) or double.session.family != "boson":
        raise TagMismatchError("H[bq+,bq-]", double.tag)
    bq = get_algebra("bq", double.cartan, double.memoize)
    return z.map_terms(lambda key: _identify(bq, key[0], key[1]), bq)  # type: ignore[index]


# --- Cocycle twist ---


class TwistedProduct(PairAlgebra):
    """H = B (x) A with a product twisted by sigma(b (x) a, b' (x) a') = eps(b) phi(a, b') eps(a').

    mode "bullet": x . y = sum sigma(x_1, y_1) x_2 y_2 sigma^-1(x_3, y_3)
    mode "circ":   x o y = sum sigma(x_1, y_1) x_2 y_2
    """

    def __init__(self, session: PairingSession, mode: str) -> None:
        if mode not in ("bullet", "circ"):
            raise ValueError(f"unknown twist mode {mode!r}")
        super().__init__(
            f"H{mode}[{session.positive.tag},{session.negative.tag}]",
            session,
            session.negative,
            session.positive,
        )
        self.mode = mode

    def sigma_basis(self, x: PairKey, y: PairKey, inverse: bool = False) -> QRat:
        b, a = x
        b2, a2 = y
        scale = self.first.counit_basis(b) * self.second.counit_basis(a2)
        if not scale:
            return QRat.zero()
        if not inverse:
            return scale * self.session.pair_monomials(a, b2)
        s_b2 = self.first.antipode_monomial(b2)
        total = QRat.zero()
        for k, c in s_b2.terms.items():
            total += c * self.session.pair_monomials(a, k)  # type: ignore[arg-type]
        return scale * total

    def _mul_basis(self, left: Key, right: Key) -> dict[Key, QRat]:
        b, a = left  # type: ignore[misc]
        b2, a2 = right  # type: ignore[misc]
        unit_b, unit_a = self.unit_key()
        result: dict[Key, QRat] = {}
        if self.mode == "circ":
            legs_a = self.second.delta_monomial(a)
            legs_b = self.first.delta_monomial(b2)
        else:
            legs_a = self._delta3(1, a)
            legs_b = self._delta3(0, b2)
        for xs, ca in legs_a.items():
            for ys, cb in legs_b.items():
                coeff = ca * cb * self.sigma_basis((unit_b, xs[0]), (ys[0], unit_a))
                if coeff and self.mode == "bullet":
                    coeff = coeff * self.sigma_basis((unit_b, xs[2]), (ys[2], unit_a), inverse=True)
                if not coeff:
                    continue
                for kb, c1 in self.first.mul_basis(b, ys[1]).items():
                    for ka, c2 in self.second.mul_basis(xs[1], a2).items():
                        add_into(result, (kb, ka), coeff * c1 * c2)
        return result


class CocycleTwist:
    """The twisted products of H = B (x) A and the maps relating them to the doubles."""

    def __init__(self, session: PairingSession) -> None:
        self.session = session
        self.bullet = TwistedProduct(session, "bullet")
        self.circ = TwistedProduct(session, "circ")
        self.double = quantum_double(session)

    def _pairs(self, x: Element, y: Element) -> list[tuple[PairKey, PairKey, QRat]]:
        return [
            (kx, ky, cx * cy)  # type: ignore[misc]
            for kx, cx in x.terms.items()
            for ky, cy in y.terms.items()
        ]

    def sigma(self, x: Element, y: Element) -> QRat:
        """sigma(b (x) a, b' (x) a') = eps(b) phi(a, b') eps(a'), extended bilinearly."""
        return sum(
            (c * self.bullet.sigma_basis(kx, ky) for kx, ky, c in self._pairs(x, y)),
            QRat.zero(),
        )

    def sigma_inv(self, x: Element, y: Element) -> QRat:
        """sigma^-1(b (x) a, b' (x) a') = eps(b) phi(a, S(b')) eps(a')."""
        return sum(
            (c * self.bullet.sigma_basis(kx, ky, inverse=True) for kx, ky, c in self._pairs(x, y)),
            QRat.zero(),
        )

    def convolution(self, x: Element, y: Element) -> QRat:
        """(sigma^-1 * sigma)(x, y) = sum sigma^-1(x_1, y_1) sigma(x_2, y_2)."""
        total = QRat.zero()
        for (x1, x2), cx in self.bullet.delta(x).terms.items():
            for (y1, y2), cy in self.bullet.delta(y).terms.items():
                first = self.bullet.sigma_basis(x1, y1, inverse=True)  # type: ignore[arg-type]
                if first:
                    total += cx * cy * first * self.bullet.sigma_basis(x2, y2)  # type: ignore[arg-type]
        return total

    def bullet_mul(self, x: Element, y: Element) -> Element:
        return self.bullet.multiply(x, y)

    def circ_mul(self, x: Element, y: Element) -> Element:
        return self.circ.multiply(x, y)

    def to_twisted(self, z: Element) -> Element:
        """psi(a (x) b) = (1 (x) a) . (b (x) 1), from D_phi into the bullet product."""
        self.double.check(z)
        unit_b, unit_a = self.bullet.unit_key()
        result = self.bullet.zero()
        for (a, b), coeff in z.terms.items():  # type: ignore[misc]
            left = self.bullet.basis_element((unit_b, a))
            right = self.bullet.basis_element((b, unit_a))
            result = result + (left * right).scale(coeff)
        return result

    def gamma_inv(self, h: Element) -> Element:
        """gamma^-1(b (x) a) = (1 (x) S(a)) o (S(b) (x) 1) in the circ product."""
        self.circ.check(h)
        negative, positive = self.circ.first, self.circ.second
        result = self.circ.zero()
        for (b, a), coeff in h.terms.items():  # type: ignore[misc]
            left = self.circ.pure(negative.one(), positive.antipode_monomial(a))
            right = self.circ.pure(negative.antipode_monomial(b), positive.one())
            result = result + (left * right).scale(coeff)
        return result

    def mu_action(self, x: Element, y: Element) -> Element:
        """Miyashita-Ulbrich action x -> y: sum gamma(h_1) o y o gamma^-1(h_2), h = psi(x)."""
        self.circ.check(y)
        h = self.to_twisted(x)
        result = self.circ.zero()
        for (h1, h2), coeff in self.bullet.delta(h).terms.items():
            left = self.circ.basis_element(h1)
            right = self.gamma_inv(self.circ.basis_element(h2))
            result = result + (left * y * right).scale(coeff)
        logger.debug(f"mu_action produced {len(result.terms)} terms")
        return result

    def from_heisenberg(self, z: Element) -> Element:
        """b # a -> b (x) a in the circ product."""
        return self.circ.element(z.terms)


@cache
def quantum_double(session: PairingSession) -> QuantumDouble:
    """The shared D_phi of a session."""
    return QuantumDouble(session)


@cache
def heisenberg_double(session: PairingSession) -> HeisenbergDouble:
    """The shared H_phi of a session."""
    return HeisenbergDouble(session)


@cache
def cocycle_twist(session: PairingSession) -> CocycleTwist:
    return CocycleTwist(session)
