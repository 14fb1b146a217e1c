"""The ``qboson`` command line.

Exit codes: 0 success, 1 verification failure, 2 input error.
"""

import json
from collections.abc import Iterator
from contextlib import contextmanager
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Annotated, Any

import typer
from loguru import logger
from pydantic import ValidationError
from rich.console import Console

from qboson.algebra.elements import Element
from qboson.algebra.lattice import CartanData, Weight, cartan_preset
from qboson.cli.expressions import (
    Call,
    ExpressionContext,
    Value,
    eval_expr,
    parse_expr,
    parse_scalar,
)
from qboson.config import Settings, get_settings
from qboson.duality.doubles import HeisenbergDouble, QuantumDouble, bq_normal_form, uq_normal_form
from qboson.errors import ModuleFormatError, QBosonError
from qboson.log import configure_logging
from qboson.modules.category_o import ModuleVector, RawModule, StandardModule, decompose
from qboson.modules.io import decomposition_to_data, read_cartan, read_module, write_decomposition
from qboson.validation.suites import SUITES, InvariantValidator

app = typer.Typer(
    name="qboson",
    help="Exact computations in quantum doubles, q-Boson algebras and category O.",
    no_args_is_help=True,
    add_completion=False,
)

console = Console(soft_wrap=True, highlight=False)
err_console = Console(stderr=True, soft_wrap=True, highlight=False)

EXIT_VERIFICATION = 1
EXIT_INPUT = 2


class OutputFormat(str, Enum):
    TEXT = "text"
    JSON = "json"


class LogLevel(str, Enum):
    DEBUG = "DEBUG"
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"


class AlgebraTag(str, Enum):
    UQ_PLUS = "uq+"
    UQ_MINUS = "uq-"
    DPHI = "dphi"
    HPHI = "hphi"
    UQ = "uq"
    BQ = "bq"
    WQ = "wq"
    BQ_MINUS = "bq--"
    BQ_PLUS = "bq++"


class SuiteName(str, Enum):
    ALL = "all"
    HOPF = "hopf-axioms"
    PAIRING = "pairing"
    YD = "yd"
    BRAIDING = "braiding"
    MODULE_ALGEBRA = "module-algebra"
    PROJECTOR = "projector"


@dataclass
class CliState:
    """Per-invocation settings shared by the subcommands."""

    settings: Settings
    output_format: OutputFormat
    type_name: str | None = None
    cartan_file: Path | None = None


TypeOption = Annotated[
    str | None, typer.Option("--type", "-t", help="Cartan preset: A1, A2, B2 or G2")
]
CartanFileOption = Annotated[
    Path | None,
    typer.Option("--cartan-file", help="JSON/YAML file with 'cartan' and 'symmetrizers'"),
]
BraidedOption = Annotated[
    bool, typer.Option("--braided", help="Use the braided structure of bq-- (Delta_0, S_0)")
]
WeightOption = Annotated[
    str | None, typer.Option("--weight", "-w", help="Work in H(lambda), e.g. '2' or '1,0'")
]
ModuleOption = Annotated[
    Path | None, typer.Option("--module", "-m", help="Module file (JSON or YAML)")
]
VectorOption = Annotated[
    str | None,
    typer.Option("--vector", help="Vector of the module file as WEIGHT=c1,c2,..."),
]
DepthOption = Annotated[int, typer.Option("--depth", help="Window depth below each seed")]


def _algebra_option(default_help: str) -> Any:
    return typer.Option("--algebra", "-a", help=f"Algebra generators land in ({default_help})")


# --- Plumbing ---


@contextmanager
def _input_errors() -> Iterator[None]:
    """Report any QBosonError and exit with the input-error code."""
    try:
        yield
    except QBosonError as exc:
        logger.debug(f"{type(exc).__name__}: {exc}")
        err_console.print(f"error: {exc}", markup=False)
        raise typer.Exit(EXIT_INPUT) from exc


def _state(ctx: typer.Context) -> CliState:
    state = ctx.obj
    if not isinstance(state, CliState):
        state = CliState(get_settings(), OutputFormat.TEXT)
        ctx.obj = state
    return state


def _cartan(state: CliState, type_name: str | None, cartan_file: Path | None) -> CartanData:
    cartan_file = cartan_file or state.cartan_file
    if cartan_file is not None:
        return read_cartan(cartan_file)
    return cartan_preset(type_name or state.type_name or state.settings.default_type)


def _emit(state: CliState, command: str, text: str, payload: dict[str, Any]) -> None:
    if state.output_format is OutputFormat.JSON:
        document = {"command": command, **payload}
        console.print(json.dumps(document, indent=2, sort_keys=True), markup=False)
    else:
        console.print(text, markup=False)


def _evaluate_call(function: str, texts: list[str], context: ExpressionContext) -> Value:
    node = Call(function, tuple(parse_expr(text) for text in texts))
    return eval_expr(node, context)


def _parse_vector(module: RawModule, text: str) -> ModuleVector:
    """WEIGHT=c1,c2,... as a vector of the module."""
    weight_text, separator, coords_text = text.partition("=")
    if not separator:
        raise ModuleFormatError(f"--vector expects WEIGHT=c1,c2,..., got {text!r}")
    weight = Weight.parse(weight_text.strip())
    coords = [parse_scalar(part) for part in coords_text.split(",")]
    return module.vector(weight, coords)


def _module_context(
    state: CliState,
    algebra: AlgebraTag,
    weight: str | None,
    module_file: Path | None,
    vector: str | None,
    depth: int,
    type_name: str | None,
    cartan_file: Path | None,
) -> ExpressionContext:
    if module_file is not None:
        raw = read_module(module_file, state.settings)
        bound = _parse_vector(raw, vector) if vector is not None else None
        return ExpressionContext(raw.cartan, algebra.value, module=raw, vector=bound, depth=depth)
    if weight is None:
        raise ModuleFormatError("give --weight for H(lambda) or --module for a module file")
    cartan = _cartan(state, type_name, cartan_file)
    highest = StandardModule.highest_weight(cartan, Weight.parse(weight), state.settings)
    return ExpressionContext(cartan, algebra.value, module=highest, depth=depth)


# --- Commands ---


@app.callback()
def main(
    ctx: typer.Context,
    output_format: Annotated[
        OutputFormat | None, typer.Option("--format", "-f", help="text or json")
    ] = None,
    log_level: Annotated[LogLevel | None, typer.Option("--log-level", help="Log level")] = None,
    type_name: TypeOption = None,
    cartan_file: CartanFileOption = None,
) -> None:
    """Exact symbolic kernel for quantum doubles and q-Boson algebras."""
    try:
        settings = get_settings()
    except ValidationError as exc:
        err_console.print(f"error: invalid configuration: {exc}", markup=False)
        raise typer.Exit(EXIT_INPUT) from exc
    if log_level is not None:
        settings = settings.model_copy(update={"log_level": log_level.value})
    configure_logging(settings)
    ctx.obj = CliState(
        settings, output_format or OutputFormat(settings.output_format), type_name, cartan_file
    )


@app.command()
def normalize(
    ctx: typer.Context,
    expression: Annotated[str, typer.Argument(help="Expression to normalize")],
    algebra: Annotated[AlgebraTag, _algebra_option("default uq")] = AlgebraTag.UQ,
    quotient: Annotated[
        bool, typer.Option("--quotient", help="Map dphi to U_q and hphi to B_q")
    ] = False,
    type_name: TypeOption = None,
    cartan_file: CartanFileOption = None,
) -> None:
    """Print the normal form of an expression."""
    state = _state(ctx)
    with _input_errors():
        cartan = _cartan(state, type_name, cartan_file)
        context = ExpressionContext(cartan, algebra.value, settings=state.settings)
        value = eval_expr(parse_expr(expression), context)
        if quotient and isinstance(value, Element):
            if isinstance(value.algebra, QuantumDouble):
                value = uq_normal_form(value)
            elif isinstance(value.algebra, HeisenbergDouble):
                value = bq_normal_form(value)
    _emit(state, "normalize", str(value), {"input": expression, "result": str(value)})


@app.command()
def pair(
    ctx: typer.Context,
    left: Annotated[str, typer.Argument(help="Element of uq+ or bq+ (E-words, e-words)")],
    right: Annotated[str, typer.Argument(help="Element of uq- or bq- (F-words, f-words)")],
    algebra: Annotated[AlgebraTag, _algebra_option("default bq")] = AlgebraTag.BQ,
    type_name: TypeOption = None,
    cartan_file: CartanFileOption = None,
) -> None:
    """Evaluate the Hopf pairing phi(left, right)."""
    state = _state(ctx)
    with _input_errors():
        cartan = _cartan(state, type_name, cartan_file)
        context = ExpressionContext(cartan, algebra.value, settings=state.settings)
        value = _evaluate_call("pair", [left, right], context)
    _emit(state, "pair", str(value), {"left": left, "right": right, "result": str(value)})


@app.command()
def act(
    ctx: typer.Context,
    acting: Annotated[str, typer.Argument(help="Element of U_q, a brick or the double")],
    target: Annotated[str, typer.Argument(help="Element acted on (W_q, a brick or H_phi)")],
    algebra: Annotated[AlgebraTag, _algebra_option("default wq")] = AlgebraTag.WQ,
    type_name: TypeOption = None,
    cartan_file: CartanFileOption = None,
) -> None:
    """Apply the Schrödinger action (or the U_q action on W_q)."""
    state = _state(ctx)
    with _input_errors():
        cartan = _cartan(state, type_name, cartan_file)
        context = ExpressionContext(cartan, algebra.value, settings=state.settings)
        value = _evaluate_call("act", [acting, target], context)
    _emit(state, "act", str(value), {"acting": acting, "target": target, "result": str(value)})


@app.command()
def delta(
    ctx: typer.Context,
    expression: Annotated[str, typer.Argument(help="Element of a Hopf brick or the double")],
    braided: BraidedOption = False,
    algebra: Annotated[AlgebraTag, _algebra_option("default bq")] = AlgebraTag.BQ,
    type_name: TypeOption = None,
    cartan_file: CartanFileOption = None,
) -> None:
    """Print the coproduct (or Delta_0 with --braided)."""
    state = _state(ctx)
    with _input_errors():
        cartan = _cartan(state, type_name, cartan_file)
        context = ExpressionContext(cartan, algebra.value, braided=braided, settings=state.settings)
        value = _evaluate_call("delta", [expression], context)
    _emit(state, "delta", str(value), {"input": expression, "braided": braided, "result": str(value)})


@app.command()
def antipode(
    ctx: typer.Context,
    expression: Annotated[str, typer.Argument(help="Element of a Hopf brick")],
    braided: BraidedOption = False,
    algebra: Annotated[AlgebraTag, _algebra_option("default bq")] = AlgebraTag.BQ,
    type_name: TypeOption = None,
    cartan_file: CartanFileOption = None,
) -> None:
    """Print the antipode (or the braided antipode with --braided)."""
    state = _state(ctx)
    with _input_errors():
        cartan = _cartan(state, type_name, cartan_file)
        context = ExpressionContext(cartan, algebra.value, braided=braided, settings=state.settings)
        value = _evaluate_call("S", [expression], context)
    _emit(state, "antipode", str(value), {"input": expression, "braided": braided, "result": str(value)})


@app.command()
def project(
    ctx: typer.Context,
    expression: Annotated[str, typer.Argument(help="Module vector; v is the bound vector")] = "v",
    weight: WeightOption = None,
    module_file: ModuleOption = None,
    vector: VectorOption = None,
    depth: DepthOption = 3,
    algebra: Annotated[AlgebraTag, _algebra_option("default wq")] = AlgebraTag.WQ,
    type_name: TypeOption = None,
    cartan_file: CartanFileOption = None,
) -> None:
    """Apply the extremal projector P to a module vector."""
    state = _state(ctx)
    with _input_errors():
        context = _module_context(
            state, algebra, weight, module_file, vector, depth, type_name, cartan_file
        )
        value = _evaluate_call("P", [expression], context)
    _emit(state, "project", str(value), {"input": expression, "result": str(value)})


@app.command()
def rho(
    ctx: typer.Context,
    expression: Annotated[str, typer.Argument(help="Module vector; v is the bound vector")] = "v",
    weight: WeightOption = None,
    module_file: ModuleOption = None,
    vector: VectorOption = None,
    depth: DepthOption = 3,
    algebra: Annotated[AlgebraTag, _algebra_option("default wq")] = AlgebraTag.WQ,
    type_name: TypeOption = None,
    cartan_file: CartanFileOption = None,
) -> None:
    """Apply the comodule map rho to a module vector."""
    state = _state(ctx)
    with _input_errors():
        context = _module_context(
            state, algebra, weight, module_file, vector, depth, type_name, cartan_file
        )
        value = _evaluate_call("rho", [expression], context)
    _emit(state, "rho", str(value), {"input": expression, "result": str(value)})


@app.command(name="decompose")
def decompose_command(
    ctx: typer.Context,
    module_file: Annotated[Path, typer.Argument(help="Module file (JSON or YAML)")],
    report: Annotated[
        Path | None, typer.Option("--report", "-r", help="Where to write the isomorphism data")
    ] = None,
) -> None:
    """Decompose a module into highest-weight modules H(lambda)."""
    state = _state(ctx)
    with _input_errors():
        module = read_module(module_file, state.settings)
        result = decompose(module)
        path = report or state.settings.decomposition_path / f"{module_file.stem}.json"
        write_decomposition(result, path)
    multiplicities = decomposition_to_data(result)["multiplicities"]
    text = "\n".join(
        [
            json.dumps(multiplicities),
            f"verified: {'yes' if result.verified else 'no'}",
            f"report: {path}",
        ]
    )
    _emit(
        state,
        "decompose",
        text,
        {"multiplicities": multiplicities, "verified": result.verified, "report": str(path)},
    )
    if not result.verified:
        raise typer.Exit(EXIT_VERIFICATION)


@app.command()
def verify(
    ctx: typer.Context,
    suite: Annotated[SuiteName, typer.Option("--suite", "-s", help="Suite to run")] = SuiteName.ALL,
    max_degree: Annotated[
        int | None, typer.Option("--max-degree", help="Degree bound (at most QBOSON_MAX_DEGREE)")
    ] = None,
    seed: Annotated[int, typer.Option("--seed", help="Seed for sampled checks")] = 0,
    type_name: TypeOption = None,
    cartan_file: CartanFileOption = None,
) -> None:
    """Run invariant suites and report pass/fail counts."""
    state = _state(ctx)
    with _input_errors():
        cartan = _cartan(state, type_name, cartan_file)
        validator = InvariantValidator(cartan, max_degree, state.settings, seed)
        names = SUITES if suite is SuiteName.ALL else (suite.value,)
        reports = [validator.run(name) for name in names]
    passed = all(report.all_passed for report in reports)
    _emit(
        state,
        "verify",
        "\n\n".join(report.summary() for report in reports),
        {"passed": passed, "reports": [report.to_dict() for report in reports]},
    )
    if not passed:
        raise typer.Exit(EXIT_VERIFICATION)
