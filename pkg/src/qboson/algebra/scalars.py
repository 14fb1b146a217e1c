"""Exact scalars in Q(q^(1/D)) and q-combinatorics."""

from __future__ import annotations

from fractions import Fraction
from functools import cache
from math import gcd, lcm
from typing import TYPE_CHECKING, Any

from sympy import ZZ, integer_nthroot
from sympy.polys.fields import field

from qboson.errors import DivisionByZeroError, ScalarError

if TYPE_CHECKING:
    from collections.abc import Iterable

# u stands for q^(1/D); D is carried per scalar and kept minimal.
_FIELD, _U = field("u", ZZ)
_RING = _FIELD.ring
DOMAIN = _FIELD.to_domain()


def _exponents(poly: Any) -> Iterable[int]:
    return (monom[0] for monom in poly)


def _substitute(poly: Any, factor: int, divide: bool = False) -> Any:
    """Rescale every exponent of a univariate polynomial."""
    terms = {}
    for (exp,), coeff in poly.items():
        terms[(exp // factor if divide else exp * factor,)] = coeff
    return _RING.from_dict(terms)


def _lift(value: Any, factor: int) -> Any:
    if factor == 1:
        return value
    return _FIELD.new(_substitute(value.numer, factor), _substitute(value.denom, factor))


class QRat:
    """An exact element of Q(q^(1/D)).

    Stored as a reduced fraction of integer polynomials in u = q^(1/D) with D made
    minimal, so structural equality is mathematical equality. Instances are immutable.
    """

    __slots__ = ("_d", "_value")

    def __init__(self, value: Any, d: int = 1) -> None:
        """Wrap a sympy fraction in u; D is reduced to its minimum."""
        if not value:
            d = 1
        else:
            g = d
            for exp in _exponents(value.numer):
                g = gcd(g, exp)
            for exp in _exponents(value.denom):
                g = gcd(g, exp)
            if g > 1:
                value = _FIELD.new(
                    _substitute(value.numer, g, divide=True),
                    _substitute(value.denom, g, divide=True),
                )
                d //= g
        self._value = value
        self._d = d

    # --- Constructors ---

    @classmethod
    def coerce(cls, value: QRat | int | Fraction) -> QRat:
        """Convert an int, Fraction or QRat into a QRat."""
        if isinstance(value, QRat):
            return value
        if isinstance(value, int):
            return cls(_FIELD(value))
        if isinstance(value, Fraction):
            return cls(_FIELD.new(_RING(value.numerator), _RING(value.denominator)))
        raise ScalarError(f"cannot interpret {value!r} as a scalar")

    @classmethod
    def zero(cls) -> QRat:
        return _ZERO

    @classmethod
    def one(cls) -> QRat:
        return _ONE

    @classmethod
    def q(cls) -> QRat:
        """The indeterminate q."""
        return cls(_U)

    @classmethod
    def q_power(cls, exponent: int | Fraction) -> QRat:
        """Return q^exponent for an integer or rational exponent."""
        exponent = Fraction(exponent)
        return cls(_U**exponent.numerator, exponent.denominator)

    @classmethod
    def parse(cls, text: str) -> QRat:
        """Parse a scalar written in the scalar grammar, e.g. ``1 - q^-2``."""
        from qboson.cli.expressions import parse_scalar

        return parse_scalar(text)

    # --- Structure ---

    @property
    def denominator_root(self) -> int:
        """The D of this scalar: it lives in Q(q^(1/D))."""
        return self._d

    def _aligned(self, other: QRat) -> tuple[Any, Any, int]:
        if self._d == other._d:
            return self._value, other._value, self._d
        d = lcm(self._d, other._d)
        return _lift(self._value, d // self._d), _lift(other._value, d // other._d), d

    def raw(self, d: int) -> Any:
        """The underlying fraction in u = q^(1/d); d must be a multiple of this scalar's D."""
        if d % self._d:
            raise ScalarError(f"cannot express {self} over q^(1/{d})")
        return _lift(self._value, d // self._d)

    def is_zero(self) -> bool:
        return not self._value

    def __bool__(self) -> bool:
        return bool(self._value)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int | Fraction):
            other = QRat.coerce(other)
        if not isinstance(other, QRat):
            return NotImplemented
        return self._d == other._d and self._value == other._value

    def __hash__(self) -> int:
        return hash((self._d, self._value))

    # --- Arithmetic ---

    def __add__(self, other: QRat | int | Fraction) -> QRat:
        a, b, d = self._aligned(QRat.coerce(other))
        return QRat(a + b, d)

    __radd__ = __add__

    def __sub__(self, other: QRat | int | Fraction) -> QRat:
        a, b, d = self._aligned(QRat.coerce(other))
        return QRat(a - b, d)

    def __rsub__(self, other: QRat | int | Fraction) -> QRat:
        return QRat.coerce(other) - self

    def __mul__(self, other: QRat | int | Fraction) -> QRat:
        a, b, d = self._aligned(QRat.coerce(other))
        return QRat(a * b, d)

    __rmul__ = __mul__

    def __truediv__(self, other: QRat | int | Fraction) -> QRat:
        other = QRat.coerce(other)
        if not other:
            raise DivisionByZeroError(f"division of {self} by zero")
        a, b, d = self._aligned(other)
        return QRat(a / b, d)

    def __rtruediv__(self, other: QRat | int | Fraction) -> QRat:
        return QRat.coerce(other) / self

    def __neg__(self) -> QRat:
        return QRat(-self._value, self._d)

    def __pos__(self) -> QRat:
        return self

    def __pow__(self, exponent: int) -> QRat:
        if exponent < 0:
            return self.inv() ** (-exponent)
        return QRat(self._value**exponent, self._d)

    def inv(self) -> QRat:
        """Multiplicative inverse."""
        if not self:
            raise DivisionByZeroError("inverse of zero")
        return QRat(1 / self._value, self._d)

    # --- Evaluation and printing ---

    def evaluate(self, q: Fraction | int) -> Fraction:
        """Evaluate exactly at a rational value of q.

        Raises:
            ScalarError: if q has no rational D-th root or q is a pole
        """
        q = Fraction(q)
        if self._d == 1:
            u = q
        else:
            if q <= 0:
                raise ScalarError(f"q^(1/{self._d}) is not rational at q={q}")
            num, num_exact = integer_nthroot(q.numerator, self._d)
            den, den_exact = integer_nthroot(q.denominator, self._d)
            if not (num_exact and den_exact):
                raise ScalarError(f"q^(1/{self._d}) is not rational at q={q}")
            u = Fraction(num, den)

        def at(poly: Any) -> Fraction:
            return sum(
                (Fraction(int(coeff)) * u**exp for (exp,), coeff in poly.items()),
                Fraction(0),
            )

        denominator = at(self._value.denom)
        if denominator == 0:
            raise ScalarError(f"{self} has a pole at q={q}")
        return at(self._value.numer) / denominator

    def laurent_terms(self) -> list[tuple[Fraction, Fraction]] | None:
        """Return (q-exponent, coefficient) pairs, highest first, if this is a Laurent polynomial."""
        denom = dict(self._value.denom.items())
        if len(denom) != 1:
            return None
        ((shift,), lead) = next(iter(denom.items()))
        lead = Fraction(int(lead))
        terms = [
            (Fraction(exp - shift, self._d), Fraction(int(coeff)) / lead)
            for (exp,), coeff in self._value.numer.items()
        ]
        return sorted(terms, reverse=True)

    def is_monomial(self) -> bool:
        """True for c*q^k with a single term."""
        terms = self.laurent_terms()
        return terms is not None and len(terms) == 1

    def is_negative(self) -> bool:
        """True when the printed form starts with a minus sign."""
        terms = self.laurent_terms()
        if terms is not None:
            return bool(terms) and terms[0][1] < 0
        return self._value.numer.LC < 0

    def __str__(self) -> str:
        if not self:
            return "0"
        terms = self.laurent_terms()
        if terms is not None:
            return _format_laurent(terms)
        numer = _format_laurent(_poly_terms(self._value.numer, self._d))
        denom = _format_laurent(_poly_terms(self._value.denom, self._d))
        if len(self._value.numer) > 1:
            numer = f"({numer})"
        return f"{numer}/({denom})"

    def __repr__(self) -> str:
        return f"QRat({self})"


def _poly_terms(poly: Any, d: int) -> list[tuple[Fraction, Fraction]]:
    return sorted(
        ((Fraction(exp, d), Fraction(int(coeff))) for (exp,), coeff in poly.items()),
        reverse=True,
    )


def _format_power(exponent: Fraction) -> str:
    if exponent == 0:
        return ""
    if exponent == 1:
        return "q"
    if exponent.denominator == 1:
        return f"q^{exponent.numerator}"
    return f"q^({exponent.numerator}/{exponent.denominator})"


def _format_laurent(terms: list[tuple[Fraction, Fraction]]) -> str:
    pieces: list[str] = []
    for position, (exponent, coeff) in enumerate(terms):
        power = _format_power(exponent)
        magnitude = abs(coeff)
        if not power:
            body = str(magnitude)
        elif magnitude == 1:
            body = power
        else:
            body = f"{magnitude}*{power}"
        if position == 0:
            pieces.append(f"-{body}" if coeff < 0 else body)
        else:
            pieces.append(f" - {body}" if coeff < 0 else f" + {body}")
    return "".join(pieces)


_ZERO = QRat(_FIELD(0))
_ONE = QRat(_FIELD(1))


# --- q-combinatorics ---


@cache
def q_int(n: int, step: int = 1) -> QRat:
    """Quantum integer [n] in the base q^step."""
    if n < 0:
        return -q_int(-n, step)
    total = QRat.zero()
    for k in range(n):
        total += QRat.q_power(step * (n - 1 - 2 * k))
    return total


@cache
def q_fact(n: int, step: int = 1) -> QRat:
    """Quantum factorial [n]!."""
    if n < 0:
        raise ScalarError(f"q-factorial of negative integer {n}")
    result = QRat.one()
    for k in range(1, n + 1):
        result *= q_int(k, step)
    return result


@cache
def q_binom(n: int, k: int, step: int = 1) -> QRat:
    """Gaussian binomial [n choose k] as a Laurent polynomial."""
    if n < 0 or not 0 <= k <= n:
        raise ScalarError(f"q-binomial out of range: n={n}, k={k}")
    return q_fact(n, step) / (q_fact(k, step) * q_fact(n - k, step))


def q_number_identity_checks(n_max: int = 12) -> dict[str, bool]:
    """Check the q-binomial identities used by the braided antipode, for all n <= n_max.

    Returns:
        Mapping of identity name to whether it held for every n in range
    """
    pascal = True
    symmetry = True
    alternating = True
    for n in range(n_max + 1):
        for p in range(n + 1):
            # [n+1, p+1] = q^(p+1) [n, p+1] + q^(p-n) [n, p]
            upper = q_binom(n, p + 1) if p + 1 <= n else QRat.zero()
            rhs = QRat.q_power(p + 1) * upper + QRat.q_power(p - n) * q_binom(n, p)
            pascal = pascal and q_binom(n + 1, p + 1) == rhs
            symmetry = symmetry and q_binom(n, p) == q_binom(n, n - p)
        if n >= 1:
            total = QRat.zero()
            for i in range(n + 1):
                term = QRat.q_power(-i * (n - 1)) * q_binom(n, i)
                total = total - term if i % 2 else total + term
            alternating = alternating and total.is_zero()
    return {"pascal": pascal, "symmetry": symmetry, "alternating_sum": alternating}
