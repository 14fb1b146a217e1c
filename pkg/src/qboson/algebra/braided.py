"""Braided Hopf structure on the torus-free negative boson brick B_q^{--}."""

from __future__ import annotations

from qboson.algebra.elements import Element, Key, Monomial, TensorElement, add_into
from qboson.algebra.presentations import HopfBrick
from qboson.algebra.scalars import QRat
from qboson.errors import BrickError


class BraidedBrick:
    """Primitive coproduct, braided product and braided antipode on f-words.

    Delta_0 = (pi (x) id) o Delta, where pi drops torus letters. The tensor square is
    multiplied with (a (x) b)(c (x) d) = q^-(wt b, wt c) ac (x) bd.
    """

    def __init__(self, brick: HopfBrick) -> None:
        if brick.positive or brick.tag != "bq-":
            raise BrickError(f"braided structure lives on bq--, not {brick.tag}")
        self.brick = brick
        self.cartan = brick.cartan
        self._antipodes: dict[Monomial, dict[Key, QRat]] = {}

    def _require(self, x: Element) -> None:
        self.brick.check(x)
        if not self.brick.is_torus_free(x):
            raise BrickError("braided maps act on bq-- (torus-free f-words) only")

    def delta0(self, x: Element) -> TensorElement:
        """Primitive coproduct: Delta_0(f_i) = f_i (x) 1 + 1 (x) f_i."""
        self._require(x)
        zero = self.cartan.zero()
        terms: dict[tuple[Key, ...], QRat] = {}
        for mono, coeff in x.terms.items():
            for (left, right), c in self.brick.delta_monomial(mono).items():
                assert isinstance(left, Monomial)
                add_into(terms, (left.with_torus(zero), right), coeff * c)
        return TensorElement((self.brick, self.brick), terms)

    def tensor_mul(self, x: TensorElement, y: TensorElement) -> TensorElement:
        """Product in the braided tensor square B (x)_braided B."""
        result: dict[tuple[Key, ...], QRat] = {}
        for (a, b), cx in x.terms.items():
            wt_b = self.brick.basis_weight(b)
            for (c, d), cy in y.terms.items():
                factor = cx * cy * self.cartan.q_inner(wt_b, self.brick.basis_weight(c), sign=-1)
                for ka, ca in self.brick.mul_basis(a, c).items():
                    for kb, cb in self.brick.mul_basis(b, d).items():
                        add_into(result, (ka, kb), factor * ca * cb)
        return TensorElement((self.brick, self.brick), result)

    def _antipode_monomial(self, mono: Monomial) -> dict[Key, QRat]:
        cached = self._antipodes.get(mono)
        if cached is not None:
            return cached
        if not mono.lower:
            result: dict[Key, QRat] = {mono: QRat.one()}
        else:
            # S(x) = -sum over proper left factors x_1 of S(x_1) x_2
            result = {}
            for (left, right), coeff in self.delta0(self.brick.basis_element(mono)).terms.items():
                assert isinstance(left, Monomial)
                if left.degree == mono.degree:
                    continue
                for k1, c1 in self._antipode_monomial(left).items():
                    for key, c in self.brick.mul_basis(k1, right).items():
                        add_into(result, key, -coeff * c1 * c)
        self._antipodes[mono] = result
        return result

    def antipode(self, x: Element) -> Element:
        """Braided antipode, the convolution inverse of the identity for Delta_0."""
        self._require(x)
        return x.map_terms(lambda key: self._antipode_monomial(key))  # type: ignore[arg-type]
