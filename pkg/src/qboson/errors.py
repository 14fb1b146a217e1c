"""Exception hierarchy shared by all qboson components."""

from __future__ import annotations


class QBosonError(Exception):
    """Base class for every error raised by qboson."""


class ScalarError(QBosonError):
    """Invalid scalar operation or literal."""


class DivisionByZeroError(ScalarError, ZeroDivisionError):
    """Division of a QRat by zero."""


class CartanError(QBosonError, ValueError):
    """Cartan matrix or symmetrizers violate the Cartan datum axioms."""


class TagMismatchError(QBosonError):
    """Operands live in different algebras."""

    def __init__(self, left: str, right: str) -> None:
        super().__init__(f"algebra mismatch: {left} vs {right}")
        self.left = left
        self.right = right


class NotHopfError(QBosonError):
    """A Hopf structure map was requested on an algebra that has none."""


class BrickError(QBosonError):
    """An element was passed to the wrong brick of a pairing or double."""


class InhomogeneousError(QBosonError):
    """An operation needing a single weight received a mixed-weight element."""


class DegreeCapError(QBosonError):
    """A requested degree exceeds the configured max_degree."""


class RelationError(QBosonError):
    """A module fails one of the defining relations on a weight space."""

    def __init__(self, relation: str, weight: str, detail: str = "") -> None:
        message = f"relation {relation} fails on weight space {weight}"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)
        self.relation = relation
        self.weight = weight


class NotInCategoryError(QBosonError):
    """A module is not in category O (e'-action not locally nilpotent within the cap)."""


class TruncationError(QBosonError):
    """An f-action left the declared finite window of a module."""


class ModuleFormatError(QBosonError):
    """A module file is malformed or inconsistent."""


class ReportError(QBosonError):
    """A result report could not be written."""


class ExpressionError(QBosonError):
    """Base class for CLI expression errors."""


class ParseError(ExpressionError):
    """Lexical or syntax error with a source position."""

    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class EvaluationError(ExpressionError):
    """Semantic error raised while evaluating a parsed expression."""

    def __init__(self, message: str, subexpression: str) -> None:
        super().__init__(f"{message} in `{subexpression}`")
        self.subexpression = subexpression
