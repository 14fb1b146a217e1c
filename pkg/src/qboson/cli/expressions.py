"""Expression language of the command line: lexer, parser, printer and evaluator.

Grammar, loosest binding first::

    expr    := tensor (("+" | "-") tensor)*
    tensor  := term ("⊗" term)*
    term    := unary (("*" | "/") unary)*
    unary   := "-" unary | power
    power   := atom ("^" exponent)?
    atom    := NUMBER | "q" | "v" | generator | call | "(" expr ")"
    call    := ("pair" | "delta" | "S" | "P" | "rho") "(" expr ("," expr)* ")"
             | "act" "(" expr ";" expr ")"

Generators are ``E1``, ``F1``, ``e1``, ``f1`` and torus letters ``K``, ``K'``, ``t``,
``t'`` followed by a simple-root index (``K2``) or a weight in fundamental-weight
coordinates (``t{1,0}``). ``@`` is accepted for ``⊗``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING

from qboson.algebra.elements import Algebra, Element, Key, Monomial, TensorElement, add_into
from qboson.algebra.lattice import CartanData, Weight
from qboson.algebra.presentations import HopfBrick, PresentedAlgebra, get_algebra, get_brick
from qboson.algebra.scalars import QRat
from qboson.config import Settings, get_settings
from qboson.duality.doubles import (
    HeisenbergDouble,
    PairAlgebra,
    heisenberg_double,
    quantum_double,
)
from qboson.duality.pairing import BRICKS, PairingSession
from qboson.errors import EvaluationError, ExpressionError, ParseError, QBosonError
from qboson.modules.action import SchrodingerAction
from qboson.modules.category_o import ModuleTensor, ModuleVector, RawModule, StandardModule

if TYPE_CHECKING:
    from collections.abc import Iterator

# --- Syntax tree ---


@dataclass(frozen=True)
class Number:
    value: int


@dataclass(frozen=True)
class Indeterminate:
    """The scalar q."""


@dataclass(frozen=True)
class GeneratorToken:
    """A generator letter; torus letters carry a root index or an explicit weight."""

    symbol: str
    index: int | None = None
    weight: tuple[int, ...] | None = None


@dataclass(frozen=True)
class Name:
    """A bound variable (only ``v``, the module vector)."""

    name: str


@dataclass(frozen=True)
class UnaryMinus:
    operand: ExprAST


@dataclass(frozen=True)
class BinaryOp:
    op: str
    left: ExprAST
    right: ExprAST


@dataclass(frozen=True)
class Power:
    base: ExprAST
    exponent: Fraction


@dataclass(frozen=True)
class Call:
    function: str
    args: tuple[ExprAST, ...]


ExprAST = Number | Indeterminate | GeneratorToken | Name | UnaryMinus | BinaryOp | Power | Call

LETTERS = ("E", "F", "e", "f")
TORUS_LETTERS = ("K", "K'", "t", "t'")
VARIABLES = ("v",)
ARITY = {"pair": 2, "act": 2, "delta": 1, "S": 1, "P": 1, "rho": 1}
SEPARATOR = {"act": ";"}

# Binding strength used by both the parser and the printer.
SUM, TENSOR, PRODUCT, UNARY, POWER, ATOM = range(1, 7)

# --- Lexer ---

_TOKEN = re.compile(
    r"""
    (?P<space>[ \t\r]+)
  | (?P<newline>\n)
  | (?P<number>\d+)
  | (?P<name>[A-Za-z]+)(?P<prime>')?(?P<index>\d+)?(?P<braces>\{[^}]*\})?
  | (?P<op>[-+*/^(),;⊗@])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int
    prime: bool = False
    index: str | None = None
    braces: str | None = None


def tokenize(text: str) -> Iterator[Token]:
    """Split text into tokens with 1-based line and column positions.

    Raises:
        ParseError: on characters outside the grammar
    """
    line, line_start, position = 1, 0, 0
    while position < len(text):
        match = _TOKEN.match(text, position)
        column = position - line_start + 1
        if match is None:
            raise ParseError(f"unexpected character {text[position]!r}", line, column)
        kind = match.lastgroup
        if match.group("name") is not None:
            yield Token(
                "name",
                match.group("name"),
                line,
                column,
                prime=match.group("prime") is not None,
                index=match.group("index"),
                braces=match.group("braces"),
            )
        elif kind == "newline":
            line, line_start = line + 1, match.end()
        elif kind == "number":
            yield Token("number", match.group("number"), line, column)
        elif kind == "op":
            op = match.group("op")
            yield Token("op", "⊗" if op == "@" else op, line, column)
        position = match.end()
    yield Token("end", "", line, len(text) - line_start + 1)


# --- Parser ---


class _Parser:
    """Recursive descent over the token stream, one method per grammar rule."""

    def __init__(self, text: str) -> None:
        self.tokens = list(tokenize(text))
        self.position = 0

    def peek(self) -> Token:
        return self.tokens[self.position]

    def advance(self) -> Token:
        token = self.tokens[self.position]
        self.position += 1
        return token

    def error(self, message: str, token: Token | None = None) -> ParseError:
        token = token or self.peek()
        return ParseError(message, token.line, token.column)

    def at_op(self, *ops: str) -> bool:
        token = self.peek()
        return token.kind == "op" and token.text in ops

    def expect(self, op: str) -> Token:
        if not self.at_op(op):
            found = self.peek().text or "end of input"
            raise self.error(f"expected {op!r}, found {found!r}")
        return self.advance()

    def parse(self) -> ExprAST:
        node = self.expr()
        if self.peek().kind != "end":
            raise self.error(f"unexpected {self.peek().text!r}")
        return node

    def expr(self) -> ExprAST:
        node = self.tensor()
        while self.at_op("+", "-"):
            op = self.advance().text
            node = BinaryOp(op, node, self.tensor())
        return node

    def tensor(self) -> ExprAST:
        node = self.term()
        while self.at_op("⊗"):
            self.advance()
            node = BinaryOp("⊗", node, self.term())
        return node

    def term(self) -> ExprAST:
        node = self.unary()
        while self.at_op("*", "/"):
            op = self.advance().text
            node = BinaryOp(op, node, self.unary())
        return node

    def unary(self) -> ExprAST:
        if self.at_op("-"):
            self.advance()
            return UnaryMinus(self.unary())
        return self.power()

    def power(self) -> ExprAST:
        node = self.atom()
        if self.at_op("^"):
            self.advance()
            node = Power(node, self.exponent())
        return node

    def exponent(self) -> Fraction:
        if self.at_op("-"):
            self.advance()
            return -Fraction(self.integer())
        if self.peek().kind == "number":
            return Fraction(self.integer())
        if self.at_op("("):
            self.advance()
            sign = 1
            if self.at_op("-"):
                self.advance()
                sign = -1
            numerator = self.integer()
            denominator = 1
            if self.at_op("/"):
                self.advance()
                token = self.peek()
                denominator = self.integer()
                if denominator == 0:
                    raise self.error("zero denominator in exponent", token)
            self.expect(")")
            return Fraction(sign * numerator, denominator)
        raise self.error("expected an integer or (a/D) exponent")

    def integer(self) -> int:
        token = self.peek()
        if token.kind != "number":
            raise self.error(f"expected an integer, found {token.text or 'end of input'!r}")
        self.advance()
        return int(token.text)

    def atom(self) -> ExprAST:
        token = self.peek()
        if token.kind == "number":
            self.advance()
            return Number(int(token.text))
        if token.kind == "name":
            self.advance()
            return self.named(token)
        if self.at_op("("):
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        raise self.error(f"unexpected {token.text or 'end of input'!r}")

    def named(self, token: Token) -> ExprAST:
        letters = token.text
        decorated = token.prime or token.index is not None or token.braces is not None
        if letters in ARITY and not decorated:
            return self.call(token)
        if letters == "q" and not decorated:
            return Indeterminate()
        if letters in VARIABLES and not decorated:
            return Name(letters)
        if letters in LETTERS:
            if token.prime or token.braces is not None or token.index is None:
                raise self.error(f"generator {letters} takes a simple-root index, e.g. {letters}1", token)
            return GeneratorToken(letters, index=int(token.index))
        symbol = f"{letters}'" if token.prime else letters
        if symbol in TORUS_LETTERS:
            if token.index is not None and token.braces is not None:
                raise self.error(f"{symbol} takes an index or a weight, not both", token)
            weight = self.braces(token) if token.braces is not None else None
            index = int(token.index) if token.index is not None else None
            return GeneratorToken(symbol, index=index, weight=weight)
        raise self.error(f"unknown name {letters!r}", token)

    def braces(self, token: Token) -> tuple[int, ...]:
        assert token.braces is not None
        body = token.braces[1:-1]
        try:
            return tuple(int(part) for part in body.split(","))
        except ValueError:
            raise self.error(f"invalid weight {token.braces!r}", token) from None

    def call(self, token: Token) -> Call:
        name = token.text
        self.expect("(")
        separator = SEPARATOR.get(name, ",")
        args = [self.expr()]
        while self.at_op(separator):
            self.advance()
            args.append(self.expr())
        self.expect(")")
        if len(args) != ARITY[name]:
            raise self.error(f"{name} takes {ARITY[name]} argument(s), got {len(args)}", token)
        return Call(name, tuple(args))


def parse_expr(text: str) -> ExprAST:
    """Parse command text into an ExprAST.

    Raises:
        ParseError: with the line and column of the offending token
    """
    return _Parser(text).parse()


# --- Printer ---


def _precedence(node: ExprAST) -> int:
    if isinstance(node, BinaryOp):
        return {"+": SUM, "-": SUM, "⊗": TENSOR}.get(node.op, PRODUCT)
    if isinstance(node, UnaryMinus):
        return UNARY
    if isinstance(node, Power):
        return POWER
    return ATOM


def _wrap(node: ExprAST, minimum: int) -> str:
    text = unparse(node)
    return f"({text})" if _precedence(node) < minimum else text


def _exponent(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"({value.numerator}/{value.denominator})"


def unparse(node: ExprAST) -> str:
    """Print an ExprAST in the grammar parse_expr reads, with minimal parentheses."""
    if isinstance(node, Number):
        return str(node.value)
    if isinstance(node, Indeterminate):
        return "q"
    if isinstance(node, Name):
        return node.name
    if isinstance(node, GeneratorToken):
        text = node.symbol
        if node.index is not None:
            text += str(node.index)
        if node.weight is not None:
            text += "{" + ",".join(str(c) for c in node.weight) + "}"
        return text
    if isinstance(node, UnaryMinus):
        return "-" + _wrap(node.operand, UNARY)
    if isinstance(node, Power):
        return f"{_wrap(node.base, ATOM)}^{_exponent(node.exponent)}"
    if isinstance(node, Call):
        separator = SEPARATOR.get(node.function, ",") + " "
        return f"{node.function}({separator.join(unparse(a) for a in node.args)})"
    level = _precedence(node)
    left, right = _wrap(node.left, level), _wrap(node.right, level + 1)
    if node.op in ("+", "-", "⊗"):
        return f"{left} {node.op} {right}"
    return f"{left}{node.op}{right}"


# --- Evaluation ---

Value = QRat | Element | TensorElement | ModuleVector | ModuleTensor

LETTER_BRICKS = {"E": "uq+", "K": "uq+", "F": "uq-", "K'": "uq-", "e": "bq+", "t": "bq+", "f": "bq-", "t'": "bq-"}

CONTEXT_TAGS = ("uq+", "uq-", "dphi", "hphi", "uq", "bq", "wq", "bq--", "bq++")


def _kind(value: Value) -> str:
    if isinstance(value, QRat):
        return "scalar"
    if isinstance(value, Element):
        return f"element of {value.algebra.tag}"
    if isinstance(value, TensorElement):
        return "tensor of " + "⊗".join(a.tag for a in value.factors)
    if isinstance(value, ModuleVector):
        return "module vector"
    return "module tensor"


class ExpressionContext:
    """Where an expression is evaluated: Cartan data, the algebra generators land in, the
    braided flag for delta and S, and an optional module whose vector is bound to ``v``.

    Generator tokens are read in the context algebra when it has that letter; otherwise in
    the Hopf brick of the letter (E, K in uq+; F, K' in uq-; e, t in bq+; f, t' in bq-).
    """

    def __init__(
        self,
        cartan: CartanData | None = None,
        algebra: str = "wq",
        *,
        braided: bool = False,
        module: RawModule | StandardModule | None = None,
        vector: ModuleVector | None = None,
        depth: int = 3,
        settings: Settings | None = None,
    ) -> None:
        if algebra not in CONTEXT_TAGS and algebra not in ("bq+", "bq-"):
            raise EvaluationError(f"unknown algebra tag {algebra!r}", algebra)
        self.settings = settings or (module.settings if module is not None else get_settings())
        self.cartan = cartan if cartan is not None else (module.cartan if module is not None else None)
        self.tag = algebra
        self.braided = braided
        self.module = module
        self.vector = vector
        self.depth = depth
        self._sessions: dict[str, PairingSession] = {}
        self._actions: dict[str, SchrodingerAction] = {}
        self._target: Algebra | None = None

    # --- Algebras ---

    def session(self, family: str) -> PairingSession:
        if family not in self._sessions:
            if self.module is not None and family == "boson":
                self._sessions[family] = self.module.session
            else:
                self._sessions[family] = PairingSession(self._cartan(), family, self.settings)  # type: ignore[arg-type]
        return self._sessions[family]

    def action(self, family: str) -> SchrodingerAction:
        if family not in self._actions:
            self._actions[family] = SchrodingerAction(self.session(family))
        return self._actions[family]

    def _cartan(self) -> CartanData:
        if self.cartan is None:
            raise EvaluationError("generators need Cartan data", self.tag)
        return self.cartan

    @property
    def target(self) -> Algebra:
        """The context algebra."""
        if self._target is None:
            if self.tag == "dphi":
                self._target = quantum_double(self.session("quantum"))
            elif self.tag == "hphi":
                self._target = heisenberg_double(self.session("boson"))
            else:
                self._target = get_algebra(self.tag, self._cartan(), self.settings.memoize)
        return self._target

    def brick(self, tag: str) -> HopfBrick:
        return get_brick(tag, self._cartan(), self.settings.memoize)

    # --- Generators ---

    def _torus_weight(self, token: GeneratorToken) -> Weight:
        cartan = self._cartan()
        if token.weight is not None:
            if len(token.weight) != cartan.rank:
                raise EvaluationError(f"weight of rank {len(token.weight)} over rank {cartan.rank}", unparse(token))
            return Weight(token.weight)
        if token.index is not None:
            return cartan.simple_root(token.index - 1)
        if cartan.rank == 1:
            return cartan.simple_root(0)
        raise EvaluationError("torus letters need an index or a weight above rank 1", unparse(token))

    @staticmethod
    def _in_algebra(algebra: PresentedAlgebra, token: GeneratorToken, weight: Weight | None) -> Element | None:
        if token.symbol in LETTERS:
            assert token.index is not None
            if algebra.upper_symbol == token.symbol:
                return algebra.upper_generator(token.index - 1)
            if algebra.lower_symbol == token.symbol:
                return algebra.lower_generator(token.index - 1)
            return None
        assert weight is not None
        symbol = algebra.torus_symbol
        # U_q and B_q identify primed and unprimed torus letters.
        if symbol == token.symbol or (
            symbol is not None and algebra.tag in ("uq", "bq") and symbol == token.symbol.rstrip("'")
        ):
            return algebra.torus_element(weight)
        return None

    def generator(self, token: GeneratorToken) -> Element:
        cartan = self._cartan()
        if token.symbol in LETTERS and not 1 <= (token.index or 0) <= cartan.rank:
            raise EvaluationError(f"generator index outside rank {cartan.rank}", unparse(token))
        weight = None if token.symbol in LETTERS else self._torus_weight(token)
        target = self.target
        if isinstance(target, PairAlgebra):
            found = self._in_algebra(target.first, token, weight)
            if found is not None:
                return target.embed_first(found)
            found = self._in_algebra(target.second, token, weight)
            if found is not None:
                return target.embed_second(found)
        elif isinstance(target, PresentedAlgebra):
            found = self._in_algebra(target, token, weight)
            if found is not None:
                return found
        found = self._in_algebra(self.brick(LETTER_BRICKS[token.symbol]), token, weight)
        assert found is not None
        return found

    # --- Coercions ---

    def brick_form(self, x: Element, positive: bool | None = None) -> Element:
        """x as an element of a Hopf brick; single-kind elements of U_q, B_q, W_q are moved
        into the brick of their letters.
        """
        algebra = x.algebra
        if isinstance(algebra, HopfBrick):
            if positive is not None and algebra.positive != positive:
                side = "positive" if positive else "negative"
                raise EvaluationError(f"expected the {side} brick, got {algebra.tag}", str(x))
            return x
        if algebra.tag not in ("uq", "bq", "wq"):
            raise EvaluationError(f"{algebra.tag} is not a Hopf brick", str(x))
        has_upper = any(mono.upper for mono in x.terms)  # type: ignore[attr-defined]
        has_lower = any(mono.lower for mono in x.terms)  # type: ignore[attr-defined]
        if positive is None:
            positive = not has_lower
        if (positive and has_lower) or (not positive and has_upper):
            raise EvaluationError("element mixes raising and lowering letters", str(x))
        family = "quantum" if algebra.tag == "uq" else "boson"
        brick = self.brick(BRICKS[family][0 if positive else 1])
        return brick.element(x.terms)

    def module_vector(self, value: Value, node: ExprAST) -> ModuleVector:
        if isinstance(value, ModuleVector):
            return value
        if isinstance(value, Element) and isinstance(self.module, StandardModule):
            return self.module.vector(self.brick_form(value, positive=False), 0, self.depth)
        raise EvaluationError(f"expected a module vector, got {_kind(value)}", unparse(node))

    def bound_vector(self, node: Name) -> ModuleVector:
        if self.vector is not None:
            return self.vector
        if isinstance(self.module, StandardModule):
            return self.module.seed_vector(0, self.depth)
        raise EvaluationError("no module vector is bound to v", unparse(node))


def _element(value: Value, node: ExprAST) -> Element:
    if not isinstance(value, Element):
        raise EvaluationError(f"expected an algebra element, got {_kind(value)}", unparse(node))
    return value


def _scale(value: Value, factor: QRat) -> Value:
    if isinstance(value, QRat):
        return value * factor
    if isinstance(value, ModuleTensor):
        return ModuleTensor(value.module, {k: c * factor for k, c in value.terms.items()}, value.legs)
    return value.scale(factor)


def _invert_torus(x: Element, node: ExprAST) -> Element:
    def inverse(key: Key) -> Key | None:
        if isinstance(key, Monomial):
            return key.with_torus(-key.torus) if key.is_torus() else None
        parts = tuple(inverse(k) for k in key)  # type: ignore[attr-defined]
        return None if any(p is None for p in parts) else parts

    if len(x.terms) == 1:
        ((key, coeff),) = x.terms.items()
        inverted = inverse(key)
        if inverted is not None:
            return x.algebra.basis_element(inverted, coeff.inv())
    raise EvaluationError("only torus elements have negative powers", unparse(node))


def _as_tensor(value: Value, partner: Value, context: ExpressionContext, node: ExprAST) -> TensorElement:
    if isinstance(value, TensorElement):
        return value
    if isinstance(value, Element):
        return TensorElement.pure(value)
    if isinstance(value, QRat):
        # A scalar leg lives in the algebra of the other side's first leg.
        if isinstance(partner, Element):
            algebra = partner.algebra
        elif isinstance(partner, TensorElement):
            algebra = partner.factors[0]
        else:
            algebra = context.target
        return TensorElement.pure(algebra.scalar(value))
    raise EvaluationError(f"cannot tensor a {_kind(value)}", unparse(node))


def _tensor(left: Value, right: Value, context: ExpressionContext, node: ExprAST) -> TensorElement:
    a = _as_tensor(left, right, context, node)
    b = _as_tensor(right, left, context, node)
    terms: dict[tuple[Key, ...], QRat] = {}
    for ka, ca in a.terms.items():
        for kb, cb in b.terms.items():
            add_into(terms, (*ka, *kb), ca * cb)
    return TensorElement((*a.factors, *b.factors), terms)


def _add(left: Value, right: Value, node: ExprAST) -> Value:
    if isinstance(left, QRat) and isinstance(right, Element):
        return right + left
    if isinstance(left, Element) and isinstance(right, QRat):
        return left + right
    if type(left) is type(right):
        return left + right  # type: ignore[operator]
    raise EvaluationError(f"cannot add {_kind(left)} and {_kind(right)}", unparse(node))


def _multiply(left: Value, right: Value, node: ExprAST) -> Value:
    if isinstance(left, QRat):
        return _scale(right, left)
    if isinstance(right, QRat):
        return _scale(left, right)
    if isinstance(left, Element) and isinstance(right, ModuleVector):
        return right.module.act(left, right)
    if isinstance(left, Element) and isinstance(right, Element):
        return left * right
    if isinstance(left, TensorElement) and isinstance(right, TensorElement):
        return left * right
    raise EvaluationError(f"cannot multiply {_kind(left)} by {_kind(right)}", unparse(node))


def _power(base: Value, exponent: Fraction, node: Power) -> Value:
    if isinstance(base, QRat):
        if exponent.denominator != 1:
            if base != QRat.q():
                raise EvaluationError("rational exponents apply to q only", unparse(node))
            return QRat.q_power(exponent)
        return base ** exponent.numerator
    if exponent.denominator != 1:
        raise EvaluationError("elements take integer exponents", unparse(node))
    x = _element(base, node.base)
    if exponent < 0:
        return _invert_torus(x, node) ** -exponent.numerator
    return x ** exponent.numerator


def _act(u: Value, x: Value, context: ExpressionContext, node: Call) -> Value:
    acting = _element(u, node.args[0])
    if isinstance(x, ModuleVector):
        return x.module.act(acting, x)
    target = _element(x, node.args[1])
    if target.algebra.tag == "wq":
        family = "boson"
    elif isinstance(target.algebra, HeisenbergDouble):
        return context.action("boson").act_on_heisenberg(acting, target)
    elif isinstance(target.algebra, HopfBrick):
        family = "quantum" if target.algebra.tag.startswith("uq") else "boson"
    else:
        raise EvaluationError(f"no action on {target.algebra.tag}", unparse(node))
    if acting.algebra.tag in ("bq", "wq") or (acting.algebra.tag == "uq" and family == "quantum"):
        acting = context.brick_form(acting)
    action = context.action(family)
    if target.algebra.tag == "wq":
        return action.uq_act_on_wq(acting, target)
    return action.act(acting, target)


def _call(node: Call, context: ExpressionContext) -> Value:
    args = [_evaluate(a, context) for a in node.args]
    name = node.function
    if name == "act":
        return _act(args[0], args[1], context, node)
    if name == "pair":
        a = context.brick_form(_element(args[0], node.args[0]), positive=True)
        b = context.brick_form(_element(args[1], node.args[1]), positive=False)
        family = "quantum" if a.algebra.tag == "uq+" else "boson"
        return context.session(family).pair(a, b)
    if name in ("P", "rho"):
        m = context.module_vector(args[0], node.args[0])
        return m.module.project(m) if name == "P" else m.module.rho(m)
    x = _element(args[0], node.args[0])
    if context.braided:
        from qboson.algebra.braided import BraidedBrick

        y = context.brick_form(x, positive=False)
        braided = BraidedBrick(y.algebra)  # type: ignore[arg-type]
        return braided.delta0(y) if name == "delta" else braided.antipode(y)
    if name == "delta" and isinstance(x.algebra, PairAlgebra):
        return x.algebra.delta(x)
    y = context.brick_form(x)
    brick = y.algebra
    assert isinstance(brick, HopfBrick)
    return brick.delta(y) if name == "delta" else brick.antipode(y)


def _evaluate(node: ExprAST, context: ExpressionContext) -> Value:
    try:
        if isinstance(node, Number):
            return QRat.coerce(node.value)
        if isinstance(node, Indeterminate):
            return QRat.q()
        if isinstance(node, GeneratorToken):
            return context.generator(node)
        if isinstance(node, Name):
            return context.bound_vector(node)
        if isinstance(node, UnaryMinus):
            return _scale(_evaluate(node.operand, context), -QRat.one())
        if isinstance(node, Power):
            return _power(_evaluate(node.base, context), node.exponent, node)
        if isinstance(node, Call):
            return _call(node, context)
        left = _evaluate(node.left, context)
        right = _evaluate(node.right, context)
        if node.op == "+":
            return _add(left, right, node)
        if node.op == "-":
            return _add(left, _scale(right, -QRat.one()), node)
        if node.op == "*":
            return _multiply(left, right, node)
        if node.op == "⊗":
            return _tensor(left, right, context, node)
        if not isinstance(right, QRat):
            raise EvaluationError(f"cannot divide by {_kind(right)}", unparse(node))
        return _scale(left, right.inv())
    except ExpressionError:
        raise
    except (QBosonError, ValueError) as exc:
        raise EvaluationError(str(exc), unparse(node)) from exc


def eval_expr(node: ExprAST, context: ExpressionContext) -> Value:
    """Evaluate a parsed expression.

    Raises:
        EvaluationError: naming the offending subexpression
    """
    return _evaluate(node, context)


def evaluate(text: str, context: ExpressionContext) -> Value:
    """parse_expr followed by eval_expr."""
    return eval_expr(parse_expr(text), context)


def parse_scalar(text: str) -> QRat:
    """Parse a scalar such as ``1 - q^-2`` or ``q^(1/2) + q^(-1/2)``.

    Raises:
        ParseError: on malformed text
        EvaluationError: if the text names generators or is not a scalar
    """
    node = parse_expr(text)
    value = eval_expr(node, ExpressionContext(settings=_SCALAR_SETTINGS))
    if not isinstance(value, QRat):
        raise EvaluationError(f"expected a scalar, got {_kind(value)}", text)
    return value


_SCALAR_SETTINGS = Settings.model_construct()
