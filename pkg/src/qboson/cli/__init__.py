"""Command line and its expression language."""

from qboson.cli.commands import app
from qboson.cli.expressions import (
    ExpressionContext,
    eval_expr,
    evaluate,
    parse_expr,
    parse_scalar,
    unparse,
)

__all__ = [
    "ExpressionContext",
    "app",
    "eval_expr",
    "evaluate",
    "parse_expr",
    "parse_scalar",
    "unparse",
]
