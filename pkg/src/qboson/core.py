"""QBoson facade - main entry point for the library."""

from pathlib import Path

from loguru import logger

from qboson.algebra.braided import BraidedBrick
from qboson.algebra.elements import Element, TensorElement
from qboson.algebra.lattice import CartanData, Weight, cartan_preset
from qboson.algebra.presentations import HopfBrick, PresentedAlgebra, get_algebra, get_brick
from qboson.algebra.scalars import QRat
from qboson.cli.expressions import ExpressionContext, Value, evaluate
from qboson.config import Settings, get_settings
from qboson.duality.doubles import HeisenbergDouble, QuantumDouble, heisenberg_double, quantum_double
from qboson.duality.pairing import Family, PairingSession
from qboson.modules.action import SchrodingerAction
from qboson.modules.category_o import Decomposition, RawModule, StandardModule, decompose
from qboson.modules.io import read_module, write_decomposition
from qboson.validation.suites import SUITES, InvariantValidator, ValidationReport


class QBoson:
    """Main facade for computations over one Cartan datum.

    Provides a simple, high-level API for:
    - Algebras, Hopf bricks and the two doubles
    - The pairing and the Schrödinger action
    - Category O: projector, comodule map and decomposition
    - Invariant suites

    Example:
        qb = QBoson("A1")

        # Normal forms in W_q
        qb.evaluate("e1*f1*e1", algebra="wq")

        # The pairing on B_q
        qb.pair("e1^2", "f1^2")

        # Decompose a module file
        result = qb.decompose_file(Path("tests/data/h2_plus_h0_scrambled.json"))
    """

    def __init__(self, cartan: CartanData | str = "A1", settings: Settings | None = None) -> None:
        """Initialize QBoson for a preset name or explicit Cartan data."""
        self.settings = settings or get_settings()
        self.cartan = cartan_preset(cartan) if isinstance(cartan, str) else cartan
        self._sessions: dict[str, PairingSession] = {}
        self._actions: dict[str, SchrodingerAction] = {}

    # --- Algebras ---

    def algebra(self, tag: str) -> PresentedAlgebra:
        """U_q, B_q, W_q or one of the Hopf bricks by tag.

        Args:
            tag: uq, bq, wq, uq+, uq-, bq+, bq-, bq++ or bq--

        Returns:
            The (memoized) presented algebra
        """
        return get_algebra(tag, self.cartan, self.settings.memoize)

    def brick(self, tag: str) -> HopfBrick:
        return get_brick(tag, self.cartan, self.settings.memoize)

    def braided(self) -> BraidedBrick:
        """bq-- with its braided coproduct and antipode."""
        return BraidedBrick(self.brick("bq-"))

    def session(self, family: Family = "boson") -> PairingSession:
        """The pairing session of a family, created once."""
        if family not in self._sessions:
            self._sessions[family] = PairingSession(self.cartan, family, self.settings)
        return self._sessions[family]

    def quantum_double(self) -> QuantumDouble:
        return quantum_double(self.session("quantum"))

    def heisenberg_double(self) -> HeisenbergDouble:
        return heisenberg_double(self.session("boson"))

    def action(self, family: Family = "boson") -> SchrodingerAction:
        if family not in self._actions:
            self._actions[family] = SchrodingerAction(self.session(family))
        return self._actions[family]

    # --- Expressions ---

    def evaluate(self, text: str, algebra: str = "wq", braided: bool = False) -> Value:
        """Parse and evaluate a command-line expression.

        Args:
            text: Expression such as ``"act(E1; f1^2)"``
            algebra: Context algebra for generator letters
            braided: Use Delta_0 and S_0 for delta and S

        Returns:
            A scalar, element or tensor
        """
        context = ExpressionContext(self.cartan, algebra, braided=braided, settings=self.settings)
        return evaluate(text, context)

    def pair(self, a: Element | str, b: Element | str) -> QRat:
        """phi(a, b) for a in a positive brick and b in the matching negative brick."""
        if isinstance(a, str) or isinstance(b, str):
            text_a = a if isinstance(a, str) else str(a)
            text_b = b if isinstance(b, str) else str(b)
            value = self.evaluate(f"pair({text_a}, {text_b})", algebra="bq")
            assert isinstance(value, QRat)
            return value
        family: Family = "quantum" if a.algebra.tag.startswith("uq") else "boson"
        return self.session(family).pair(a, b)

    def act(self, u: Element, x: Element) -> Element:
        """Schrödinger action of u on x (a brick element or an element of H_phi)."""
        family: Family = "quantum" if x.algebra.tag.startswith("uq") else "boson"
        action = self.action(family)
        if isinstance(x.algebra, HeisenbergDouble):
            return action.act_on_heisenberg(u, x)
        if x.algebra.tag == "wq":
            return action.uq_act_on_wq(u, x)
        return action.act(u, x)

    def delta(self, x: Element) -> TensorElement:
        brick = x.algebra
        if not isinstance(brick, HopfBrick):
            raise TypeError(f"{brick.tag} has no coproduct here; use a Hopf brick")
        return brick.delta(x)

    # --- Category O ---

    def highest_weight_module(self, weight: Weight | str) -> StandardModule:
        """H(lambda) for a weight given as coordinates ``"2"`` or ``"1,0"``."""
        if isinstance(weight, str):
            weight = Weight.parse(weight)
        return StandardModule.highest_weight(self.cartan, weight, self.settings)

    def read_module(self, path: Path) -> RawModule:
        return read_module(path, self.settings)

    def decompose(self, module: RawModule | StandardModule, depth: int = 3) -> Decomposition:
        """Decompose a module into highest-weight modules.

        Args:
            module: Raw module or standard module (taken at the window depth)
            depth: Window depth for standard modules

        Returns:
            Decomposition with multiplicities and the verified flag
        """
        return decompose(module, depth)

    def decompose_file(self, path: Path, report: Path | None = None) -> Decomposition:
        """Read, decompose and write the report (default under decomposition_path).

        Args:
            path: Module file (JSON or YAML)
            report: Report destination

        Returns:
            The decomposition
        """
        result = decompose(self.read_module(path))
        target = report or self.settings.decomposition_path / f"{path.stem}.json"
        write_decomposition(result, target)
        logger.info(f"Decomposed {path.name}: {result.summary()}")
        return result

    # --- Verification ---

    def verify(
        self, suites: list[str] | None = None, max_degree: int | None = None, seed: int = 0
    ) -> list[ValidationReport]:
        """Run invariant suites.

        Args:
            suites: Suite names (None for all)
            max_degree: Degree bound, at most settings.max_degree
            seed: Seed for sampled checks

        Returns:
            One report per suite
        """
        validator = InvariantValidator(self.cartan, max_degree, self.settings, seed)
        return [validator.run(name) for name in suites or SUITES]
