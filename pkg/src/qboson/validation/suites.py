"""Invariant suites - exact checks of the Hopf, pairing, braiding and module structures."""

from __future__ import annotations

import random
from collections.abc import Callable
from dataclasses import dataclass, field
from itertools import product
from typing import Any

from loguru import logger

from qboson.algebra.elements import Algebra, Element, Monomial, TensorElement, add_into
from qboson.algebra.lattice import CartanData, Weight, cartan_preset
from qboson.algebra.presentations import HopfBrick, PresentedAlgebra, get_algebra, get_brick
from qboson.algebra.scalars import QRat, q_binom, q_fact, q_number_identity_checks
from qboson.config import Settings, get_settings
from qboson.duality.doubles import (
    bq_normal_form,
    cocycle_twist,
    heisenberg_double,
    quantum_double,
    uq_normal_form,
)
from qboson.duality.pairing import PairingSession
from qboson.errors import DegreeCapError
from qboson.modules.action import SchrodingerAction
from qboson.modules.category_o import ModuleTensor, ModuleVector, StandardModule, decompose

SUITES = ("hopf-axioms", "pairing", "yd", "braiding", "module-algebra", "projector")


@dataclass
class ValidationResult:
    """Result of a validation check."""

    name: str
    passed: bool
    message: str
    details: dict[str, Any] = field(default_factory=dict)


@dataclass
class ValidationReport:
    """Complete report of one suite."""

    suite: str
    cartan: str
    results: list[ValidationResult] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        """Check if all validations passed."""
        return all(r.passed for r in self.results)

    @property
    def passed_count(self) -> int:
        return sum(1 for r in self.results if r.passed)

    @property
    def failed_count(self) -> int:
        return len(self.results) - self.passed_count

    def summary(self) -> str:
        """Generate a summary of the validation report."""
        lines = ["=" * 60, f"Invariant suite {self.suite} on {self.cartan}", "=" * 60, ""]

        for result in self.results:
            status = "PASS" if result.passed else "FAIL"
            lines.append(f"[{status}] {result.name}")
            lines.append(f"       {result.message}")
            if result.details:
                for key, value in result.details.items():
                    lines.append(f"       - {key}: {value}")
            lines.append("")

        lines.append("=" * 60)
        overall = "PASSED" if self.all_passed else "FAILED"
        lines.append(f"Overall: {overall}")
        lines.append(f"Checks: {self.passed_count} passed, {self.failed_count} failed")
        lines.append("=" * 60)

        return "\n".join(lines)

    def to_dict(self) -> dict[str, Any]:
        return {
            "suite": self.suite,
            "cartan": self.cartan,
            "passed": self.all_passed,
            "counts": {"passed": self.passed_count, "failed": self.failed_count},
            "results": [
                {
                    "name": r.name,
                    "passed": r.passed,
                    "message": r.message,
                    "details": {k: str(v) for k, v in r.details.items()},
                }
                for r in self.results
            ],
        }


def _outcome(name: str, checked: int, failures: list[str], **details: Any) -> ValidationResult:
    if failures:
        return ValidationResult(
            name=name,
            passed=False,
            message=f"{len(failures)} of {checked} cases failed",
            details={**details, "first_failures": failures[:5]},
        )
    return ValidationResult(
        name=name, passed=True, message=f"{checked} cases hold exactly", details=details
    )


def sl2_closed_form(family: str, m: int, n: int, wq: Algebra | None = None) -> Element:
    """Closed forms of U_q(sl2) acting on W_q(sl2), valid for m <= n.

    family is one of "E.e", "E.f", "F.e", "F.f" (E^m acting on e'^n, and so on).
    """
    wq = wq or get_algebra("wq", cartan_preset("A1"))
    assert isinstance(wq, PresentedAlgebra)
    e = wq.upper_generator(0)
    f = wq.lower_generator(0)
    q = QRat.q()
    if family == "E.e":
        coeff = q_fact(n + m - 1) / q_fact(n - 1) * QRat.q_power(-(2 * n + 3 + m) * m // 2)
        return (e ** (n + m)).scale(coeff)
    if family == "E.f":
        coeff = q_fact(n) / q_fact(n - m) * QRat.q_power((2 * n - m - 1) * m // 2)
        return (f ** (n - m)).scale(coeff / (q.inv() - q) ** m)
    if family == "F.e":
        coeff = q_fact(n) / q_fact(n - m) * QRat.q_power((2 * n + 3 - m) * m // 2)
        return (e ** (n - m)).scale(-coeff if m % 2 else coeff)
    if family == "F.f":
        coeff = QRat.one()
        for i in range(m):
            coeff *= 1 - QRat.q_power(-2 * (n + i))
        return (f ** (n + m)).scale(coeff)
    raise ValueError(f"unknown closed-form family {family!r}")


class InvariantValidator:
    """Runs the invariant suites over one Cartan datum."""

    HOPF_BRICKS = ("uq+", "uq-", "bq+", "bq-")
    HOPF_WORD_LENGTH = 3
    COASSOCIATIVITY_LENGTH = 4
    WEYL_DEGREE = 3
    COMMUTATOR_DEGREE = 4
    COACTION_DEGREE = 4
    Q_IDENTITY_RANGE = 12
    RANDOM_VECTORS = 20
    SL2_WEIGHTS = (0, 1, 2, 5)
    YD_SAMPLES = 12

    def __init__(
        self,
        cartan: CartanData,
        max_degree: int | None = None,
        settings: Settings | None = None,
        seed: int = 0,
    ) -> None:
        """Initialize validator with settings.

        Raises:
            DegreeCapError: if max_degree exceeds settings.max_degree
        """
        self.settings = settings or get_settings()
        self.cartan = cartan
        self.degree = self.settings.max_degree if max_degree is None else max_degree
        if self.degree > self.settings.max_degree:
            raise DegreeCapError(
                f"suite degree {self.degree} exceeds max_degree {self.settings.max_degree}"
            )
        self.seed = seed
        self._sessions: dict[str, PairingSession] = {}

    def run(self, suite: str) -> ValidationReport:
        """Run one suite by name."""
        checks: dict[str, Callable[[], list[ValidationResult]]] = {
            "hopf-axioms": self._hopf_suite,
            "pairing": self._pairing_suite,
            "yd": self._yd_suite,
            "braiding": self._braiding_suite,
            "module-algebra": self._module_algebra_suite,
            "projector": self._projector_suite,
        }
        if suite not in checks:
            raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
        logger.info(f"Running suite {suite} on {self.cartan} (degree {self.degree})")
        report = ValidationReport(suite=suite, cartan=str(self.cartan))
        report.results.extend(checks[suite]())
        logger.info(
            f"Suite {suite}: {report.passed_count} passed, {report.failed_count} failed"
        )
        return report

    def run_all(self) -> list[ValidationReport]:
        return [self.run(suite) for suite in SUITES]

    # --- Helpers ---

    def _guarded(self, name: str, check: Callable[[], ValidationResult]) -> ValidationResult:
        try:
            return check()
        except Exception as e:
            logger.warning(f"Check {name} raised {type(e).__name__}: {e}")
            return ValidationResult(name=name, passed=False, message=f"{name} failed: {e}")

    def _session(self, family: str) -> PairingSession:
        if family not in self._sessions:
            self._sessions[family] = PairingSession(self.cartan, family, self.settings)  # type: ignore[arg-type]
        return self._sessions[family]

    def _words(self, length: int) -> list[tuple[int, ...]]:
        words: list[tuple[int, ...]] = []
        for n in range(1, length + 1):
            words.extend(product(range(self.cartan.rank), repeat=n))
        return words

    # --- hopf-axioms ---

    def _hopf_suite(self) -> list[ValidationResult]:
        length = min(self.degree, self.HOPF_WORD_LENGTH)
        results = []
        for tag in self.HOPF_BRICKS:
            brick = get_brick(tag, self.cartan, self.settings.memoize)
            samples = [brick.basis_element(brick.word(w)) for w in self._words(length)]
            samples += [brick.generator(i) * brick.root_torus(i) for i in range(self.cartan.rank)]
            long_words = [
                brick.basis_element(brick.word(w))
                for w in self._words(min(self.degree, self.COASSOCIATIVITY_LENGTH))
                if len(w) > length
            ]
            results.append(
                self._guarded(
                    f"{tag} coassociativity",
                    lambda b=brick, s=samples + long_words: self._coassociativity(b, s),
                )
            )
            results.append(
                self._guarded(f"{tag} counit", lambda b=brick, s=samples: self._counit(b, s))
            )
            results.append(
                self._guarded(f"{tag} antipode", lambda b=brick, s=samples: self._antipode(b, s))
            )
            results.append(
                self._guarded(
                    f"{tag} coproduct is multiplicative",
                    lambda b=brick, s=samples: self._multiplicative(b, s),
                )
            )
        results.append(self._guarded("quotient relations", self._quotient_relations))
        results.append(self._guarded("q-binomial identities", self._q_identities))
        return results

    @staticmethod
    def _split(brick: HopfBrick) -> Callable[[Any], TensorElement]:
        return lambda key: TensorElement((brick, brick), brick.delta_monomial(key))

    def _coassociativity(self, brick: HopfBrick, samples: list[Element]) -> ValidationResult:
        failures = []
        for x in samples:
            delta = brick.delta(x)
            left = delta.expand_leg(0, self._split(brick), (brick, brick))
            right = delta.expand_leg(1, self._split(brick), (brick, brick))
            if left != right:
                failures.append(str(x))
        return _outcome(f"{brick.tag} coassociativity", len(samples), failures)

    def _counit(self, brick: HopfBrick, samples: list[Element]) -> ValidationResult:
        failures = []
        for x in samples:
            delta = brick.delta(x)
            left = delta.contract(lambda k: brick.basis_element(k[1], brick.counit_basis(k[0])))
            right = delta.contract(lambda k: brick.basis_element(k[0], brick.counit_basis(k[1])))
            if left != x or right != x:
                failures.append(str(x))
        return _outcome(f"{brick.tag} counit", len(samples), failures)

    def _antipode(self, brick: HopfBrick, samples: list[Element]) -> ValidationResult:
        """S(x_1)x_2 = x_1 S(x_2) = S^-1(x_2)x_1 = eps(x), and S o S^-1 = id."""
        failures = []
        for x in samples:
            delta = brick.delta(x)
            unit = brick.scalar(brick.counit(x))
            laws = (
                delta.contract(lambda k: brick.antipode_monomial(k[0]) * brick.basis_element(k[1])),
                delta.contract(lambda k: brick.basis_element(k[0]) * brick.antipode_monomial(k[1])),
                delta.contract(
                    lambda k: brick.antipode_monomial(k[1], inverse=True) * brick.basis_element(k[0])
                ),
            )
            if any(law != unit for law in laws):
                failures.append(f"antipode law on {x}")
            if brick.antipode(brick.antipode_inv(x)) != x or brick.antipode_inv(brick.antipode(x)) != x:
                failures.append(f"S o S^-1 on {x}")
        return _outcome(f"{brick.tag} antipode", len(samples), failures)

    def _multiplicative(self, brick: HopfBrick, samples: list[Element]) -> ValidationResult:
        failures = []
        checked = 0
        for i in range(self.cartan.rank):
            x = brick.generator(i)
            for y in samples:
                checked += 1
                if brick.delta(x * y) != brick.delta(x) * brick.delta(y):
                    failures.append(f"{x} * {y}")
        return _outcome(f"{brick.tag} coproduct is multiplicative", checked, failures)

    def _quotient_relations(self) -> ValidationResult:
        """E_iF_j - F_jE_i in D_phi/(K - K') and e'_i f_j - q^-(a_i,a_j) f_j e'_i in H_phi/(t - t')."""
        quantum = quantum_double(self._session("quantum"))
        boson = heisenberg_double(self._session("boson"))
        uq = get_algebra("uq", self.cartan, self.settings.memoize)
        bq = get_algebra("bq", self.cartan, self.settings.memoize)
        failures = []
        rank = self.cartan.rank
        for i, j in product(range(rank), repeat=2):
            x = quantum.embed_first(quantum.first.generator(i))
            y = quantum.embed_second(quantum.second.generator(j))
            expected = uq.zero()
            if i == j:
                q_i = self.cartan.q_i(i)
                expected = (uq.root_torus(i) - uq.root_torus(i, -1)).scale(
                    QRat.one() / (q_i - q_i.inv())
                )
            if uq_normal_form(x * y - y * x) != expected:
                failures.append(f"E{i + 1}F{j + 1} - F{j + 1}E{i + 1}")
            e = boson.embed_second(boson.second.generator(i))
            f = boson.embed_first(boson.first.generator(j))
            factor = self.cartan.q_inner(
                self.cartan.simple_root(i), self.cartan.simple_root(j), sign=-1
            )
            relation = bq_normal_form(e * f - (f * e).scale(factor))
            if relation != (bq.one() if i == j else bq.zero()):
                failures.append(f"e'{i + 1}f{j + 1} - q^-(a{i + 1},a{j + 1}) f{j + 1}e'{i + 1}")
        return _outcome("quotient relations", 2 * rank * rank, failures)

    def _q_identities(self) -> ValidationResult:
        outcome = q_number_identity_checks(self.Q_IDENTITY_RANGE)
        failures = [name for name, held in outcome.items() if not held]
        return _outcome(
            "q-binomial identities", len(outcome), failures, n_max=self.Q_IDENTITY_RANGE
        )

    # --- pairing ---

    def _pairing_suite(self) -> list[ValidationResult]:
        results = [
            self._guarded(
                f"{family} antipode adjointness", lambda f=family: self._adjointness(f)
            )
            for family in ("quantum", "boson")
        ]
        results.append(self._guarded("Gram ranks agree across families", self._gram_ranks))
        if self.cartan.rank == 1:
            results.append(self._guarded("sl2 pairing values", self._sl2_pairing_values))
        else:
            results.append(self._guarded("Serre elements span the radical", self._serre_radical))
        return results

    def _adjointness(self, family: str) -> ValidationResult:
        """phi(S(a), b) = phi(a, S^-1(b)) on all words of matching weight."""
        session = self._session(family)
        positive, negative = session.positive, session.negative
        length = min(self.degree, self.HOPF_WORD_LENGTH)
        failures = []
        checked = 0
        for weight in session.positive_weights(length):
            words = session.words(weight)
            for upper, lower in product(words, repeat=2):
                a = positive.basis_element(positive.word(upper))
                b = negative.basis_element(negative.word(lower))
                checked += 1
                if session.pair(positive.antipode(a), b) != session.pair(a, negative.antipode_inv(b)):
                    failures.append(f"{a} vs {b}")
        return _outcome(f"{family} antipode adjointness", checked, failures)

    def _gram_ranks(self) -> ValidationResult:
        quantum, boson = self._session("quantum"), self._session("boson")
        failures = []
        ranks: dict[str, str] = {}
        weights = quantum.positive_weights(min(self.degree, self.HOPF_WORD_LENGTH))
        for weight in weights:
            left = quantum.weight_block(weight)
            right = boson.weight_block(weight)
            ranks[str(weight)] = f"{left.rank}/{left.size}"
            if left.rank != right.rank:
                failures.append(f"{weight}: {left.rank} vs {right.rank}")
        return _outcome("Gram ranks agree across families", len(weights), failures, ranks=ranks)

    def _sl2_pairing_values(self) -> ValidationResult:
        """phi(E^n, F^n) = q^(n(n-1)/2)[n]!/(q^-1 - q)^n and phi(e'^n, f^n) = q^-(n(n-1)/2)[n]!."""
        quantum, boson = self._session("quantum"), self._session("boson")
        q = QRat.q()
        failures = []
        for n in range(1, self.degree + 1):
            half = n * (n - 1) // 2
            expected_quantum = QRat.q_power(half) * q_fact(n) / (q.inv() - q) ** n
            got = quantum.pair(quantum.positive.generator(0) ** n, quantum.negative.generator(0) ** n)
            if got != expected_quantum:
                failures.append(f"phi(E^{n}, F^{n}) = {got}")
            expected_boson = QRat.q_power(-half) * q_fact(n)
            got = boson.pair(boson.positive.generator(0) ** n, boson.negative.generator(0) ** n)
            if got != expected_boson:
                failures.append(f"phi(e'^{n}, f^{n}) = {got}")
        return _outcome("sl2 pairing values", 2 * self.degree, failures)

    def serre_element(self, i: int, j: int) -> Element:
        """sum_k (-1)^k [1 - a_ij choose k]_(q_i) E_i^(1 - a_ij - k) E_j E_i^k."""
        positive = self._session("quantum").positive
        n = 1 - self.cartan.cartan[i][j]
        step = self.cartan.symmetrizers[i]
        total = positive.zero()
        for k in range(n + 1):
            word = (i,) * (n - k) + (j,) + (i,) * k
            term = positive.basis_element(positive.word(word), q_binom(n, k, step))
            total = total - term if k % 2 else total + term
        return total

    def _serre_radical(self) -> ValidationResult:
        session = self._session("quantum")
        failures = []
        checked = 0
        skipped = []
        for i, j in product(range(self.cartan.rank), repeat=2):
            if i == j:
                continue
            coords = [0] * self.cartan.rank
            coords[i] = 1 - self.cartan.cartan[i][j]
            coords[j] = 1
            if sum(coords) > self.settings.max_degree:
                skipped.append(f"({i + 1},{j + 1})")
                continue
            checked += 1
            block = session.weight_block(self.cartan.root_weight(coords))
            if not session.in_radical(self.serre_element(i, j)):
                failures.append(f"Serre ({i + 1},{j + 1}) pairs nontrivially")
            if block.rank != block.size - 1:
                failures.append(f"Gram rank {block.rank} of {block.size} at {block.weight}")
        if skipped:
            return _outcome("Serre elements span the radical", checked, failures, skipped=skipped)
        return _outcome("Serre elements span the radical", checked, failures)

    # --- yd ---

    def _double_generators(self, action: SchrodingerAction) -> list[Element]:
        double = action.double
        positive, negative = action.positive, action.negative
        generators = []
        for i in range(self.cartan.rank):
            generators += [
                double.embed_first(positive.generator(i)),
                double.embed_first(positive.root_torus(i)),
                double.embed_second(negative.generator(i)),
                double.embed_second(negative.root_torus(i)),
            ]
        return generators

    def _wq_generators(self) -> list[Element]:
        wq = get_algebra("wq", self.cartan, self.settings.memoize)
        generators = []
        for i in range(self.cartan.rank):
            generators += [wq.lower_generator(i), wq.upper_generator(i)]
        return generators

    def _yd_suite(self) -> list[ValidationResult]:
        return [
            self._guarded("Yetter-Drinfel'd compatibility", self._yd_compatibility),
            self._guarded("coaction counit", self._coaction_counit),
        ]

    def _yd_compatibility(self) -> ValidationResult:
        action = SchrodingerAction(self._session("boson"))
        pairs = list(product(self._double_generators(action), self._wq_generators()))
        if self.cartan.rank > 1:
            pairs = random.Random(self.seed).sample(pairs, min(self.YD_SAMPLES, len(pairs)))
        failures = [f"{h} on {v}" for h, v in pairs if not action.yd_check(h, v)]
        return _outcome("Yetter-Drinfel'd compatibility", len(pairs), failures)

    def _coaction_counit(self) -> ValidationResult:
        action = SchrodingerAction(self._session("boson"))
        double, heisenberg = action.double, action.heisenberg
        failures = []
        samples = self._wq_generators()
        for v in samples:
            collapsed = action.coaction(v).contract(
                lambda k: heisenberg.basis_element(k[1], double.counit(double.basis_element(k[0])))
            )
            if collapsed != action.lift_wq(v):
                failures.append(str(v))
        return _outcome("coaction counit", len(samples), failures)

    # --- braiding ---

    def _braiding_suite(self) -> list[ValidationResult]:
        return [
            self._guarded("braid relation", self._braid_relation),
            self._guarded("braided Weyl product", self._braided_weyl),
        ]

    def _braid_relation(self) -> ValidationResult:
        """(s (x) id)(id (x) s)(s (x) id) = (id (x) s)(s (x) id)(id (x) s) on generator triples."""
        action = SchrodingerAction(self._session("boson"))
        triples = list(product(self._wq_generators(), repeat=3))
        if self.cartan.rank > 1:
            triples = random.Random(self.seed).sample(triples, min(self.YD_SAMPLES, len(triples)))
        failures = []
        for u, v, w in triples:
            tensor = TensorElement.pure(u, v, w)
            left = action.braid_legs(action.braid_legs(action.braid_legs(tensor, 0), 1), 0)
            right = action.braid_legs(action.braid_legs(action.braid_legs(tensor, 1), 0), 1)
            if left != right:
                failures.append(f"{u} (x) {v} (x) {w}")
        return _outcome("braid relation", len(triples), failures)

    def _braided_weyl(self) -> ValidationResult:
        """The braided product on B^{--} (x) B^{++} is the product of W_q."""
        session = self._session("boson")
        action = SchrodingerAction(session)
        wq = get_algebra("wq", self.cartan, self.settings.memoize)
        negative, positive = session.negative, session.positive
        tensors = []
        degree = min(self.degree, self.WEYL_DEGREE)
        for lower, upper in product(self._words(degree) + [()], repeat=2):
            if len(lower) + len(upper) > degree or not (lower or upper):
                continue
            tensors.append(
                TensorElement.pure(
                    negative.basis_element(negative.word(lower)),
                    positive.basis_element(positive.word(upper)),
                )
            )
        failures = []
        for x, y in product(tensors, repeat=2):
            combined = action.weyl_iso(action.braided_weyl_mul(x, y))
            if combined != wq.multiply(action.weyl_iso(x), action.weyl_iso(y)):
                failures.append(f"{x} * {y}")
        return _outcome("braided Weyl product", len(tensors) ** 2, failures)

    # --- module-algebra ---

    def _module_algebra_suite(self) -> list[ValidationResult]:
        results = [
            self._guarded("Miyashita-Ulbrich action", self._mu_action),
            self._guarded("twisted product isomorphism", self._twist_isomorphism),
            self._guarded("W_q is a U_q-module algebra", self._wq_module_algebra),
            self._guarded("U_q relations hold on W_q", self._commutator_relation),
        ]
        if self.cartan.rank == 1 and self.cartan.symmetrizers == (1,):
            results.append(self._guarded("sl2 closed-form actions", self._closed_forms))
            results.append(self._guarded("B_q obstruction", self._obstruction))
        return results

    def _heisenberg_generators(self, action: SchrodingerAction) -> list[Element]:
        heisenberg = action.heisenberg
        positive, negative = action.positive, action.negative
        generators = []
        for i in range(self.cartan.rank):
            generators += [
                heisenberg.embed_first(negative.generator(i)),
                heisenberg.embed_first(negative.root_torus(i)),
                heisenberg.embed_second(positive.generator(i)),
                heisenberg.embed_second(positive.root_torus(i)),
            ]
        return generators

    def _mu_action(self) -> ValidationResult:
        """x -> y through the cocycle twist equals the diagonal action of D_phi on H_phi."""
        session = self._session("boson")
        action = SchrodingerAction(session)
        twist = cocycle_twist(session)
        failures = []
        pairs = list(product(self._double_generators(action), self._heisenberg_generators(action)))
        for x, z in pairs:
            lhs = twist.mu_action(x, twist.from_heisenberg(z))
            rhs = twist.from_heisenberg(action.act_on_heisenberg(x, z))
            if lhs != rhs:
                failures.append(f"{x} on {z}")
        return _outcome("Miyashita-Ulbrich action", len(pairs), failures)

    def _twist_isomorphism(self) -> ValidationResult:
        """a (x) b -> (1 (x) a) . (b (x) 1) is multiplicative and sigma^-1 * sigma = eps (x) eps."""
        session = self._session("boson")
        action = SchrodingerAction(session)
        twist = cocycle_twist(session)
        generators = self._double_generators(action)
        failures = []
        for x, y in product(generators, repeat=2):
            if twist.to_twisted(x * y) != twist.bullet_mul(twist.to_twisted(x), twist.to_twisted(y)):
                failures.append(f"to_twisted({x} * {y})")
            hx, hy = twist.to_twisted(x), twist.to_twisted(y)
            if twist.convolution(hx, hy) != twist.bullet.counit(hx) * twist.bullet.counit(hy):
                failures.append(f"convolution on {x}, {y}")
        return _outcome("twisted product isomorphism", len(generators) ** 2, failures)

    def _uq_generators(self) -> list[Element]:
        uq = get_algebra("uq", self.cartan, self.settings.memoize)
        generators = []
        for i in range(self.cartan.rank):
            generators += [uq.upper_generator(i), uq.lower_generator(i), uq.root_torus(i)]
        return generators

    def _wq_module_algebra(self) -> ValidationResult:
        """u.(xy) = sum (u_1.x)(u_2.y) for U_q generators u and W_q generators x, y."""
        action = SchrodingerAction(self._session("boson"))
        double = action.double
        wq = get_algebra("wq", self.cartan, self.settings.memoize)
        failures = []
        checked = 0
        for u in self._uq_generators():
            split = double.delta(action.as_double(u))
            for x, y in product(self._wq_generators(), repeat=2):
                checked += 1
                rhs = wq.zero()
                for (h1, h2), coeff in split.terms.items():
                    left = action.uq_act_on_wq(double.basis_element(h1), x)
                    right = action.uq_act_on_wq(double.basis_element(h2), y)
                    rhs = rhs + (left * right).scale(coeff)
                if action.uq_act_on_wq(u, x * y) != rhs:
                    failures.append(f"{u} on {x}*{y}")
        return _outcome("W_q is a U_q-module algebra", checked, failures)

    def wq_monomials(self, degree: int) -> list[Element]:
        """Normal-form monomials f-word e-word of W_q with total degree at most degree."""
        wq = get_algebra("wq", self.cartan, self.settings.memoize)
        zero = self.cartan.zero()
        words = [(), *self._words(degree)]
        return [
            wq.basis_element(Monomial(lower, upper, zero))
            for lower, upper in product(words, repeat=2)
            if len(lower) + len(upper) <= degree
        ]

    def _commutator_relation(self) -> ValidationResult:
        """E_i.(F_j.w) - F_j.(E_i.w) = delta_ij (K_i.w - K_i^-1.w)/(q_i - q_i^-1) on W_q."""
        action = SchrodingerAction(self._session("boson"))
        uq = get_algebra("uq", self.cartan, self.settings.memoize)
        degree = min(self.degree, self.COMMUTATOR_DEGREE)
        samples = self.wq_monomials(degree)
        failures = []
        checked = 0
        for i, j in product(range(self.cartan.rank), repeat=2):
            big_e, big_f = uq.upper_generator(i), uq.lower_generator(j)
            q_i = self.cartan.q_i(i)
            for w in samples:
                checked += 1
                lhs = action.uq_act_on_wq(big_e, action.uq_act_on_wq(big_f, w)) - action.uq_act_on_wq(
                    big_f, action.uq_act_on_wq(big_e, w)
                )
                if i == j:
                    torus = action.uq_act_on_wq(uq.root_torus(i), w) - action.uq_act_on_wq(
                        uq.root_torus(i, -1), w
                    )
                    lhs = lhs - torus.scale(QRat.one() / (q_i - q_i.inv()))
                if not lhs.is_zero():
                    failures.append(f"E{i + 1}F{j + 1} - F{j + 1}E{i + 1} on {w}")
        return _outcome("U_q relations hold on W_q", checked, failures, max_degree=degree)

    def _closed_forms(self) -> ValidationResult:
        action = SchrodingerAction(self._session("boson"))
        uq = get_algebra("uq", self.cartan, self.settings.memoize)
        wq = get_algebra("wq", self.cartan, self.settings.memoize)
        acting = {"E": uq.upper_generator(0), "F": uq.lower_generator(0)}
        targets = {"e": wq.upper_generator(0), "f": wq.lower_generator(0)}
        top = min(self.degree, 5)
        failures = []
        checked = 0
        for (name, u), (letter, x) in product(acting.items(), targets.items()):
            for n in range(1, top + 1):
                value = x**n
                for m in range(1, n + 1):
                    value = action.uq_act_on_wq(u, value)
                    checked += 1
                    if value != sl2_closed_form(f"{name}.{letter}", m, n, wq):
                        failures.append(f"{name}^{m}.{letter}^{n}")
        return _outcome("sl2 closed-form actions", checked, failures, max_n=top)

    def _obstruction(self) -> ValidationResult:
        """E.t = (1 - q^2) e t^2 and E.t' = 0 in H_phi, so the action does not descend to B_q."""
        action = SchrodingerAction(self._session("boson"))
        heisenberg, positive, negative = action.heisenberg, action.positive, action.negative
        uq = get_algebra("uq", self.cartan, self.settings.memoize)
        big_e = uq.upper_generator(0)
        q = QRat.q()
        e = (positive.root_torus(0, -1) * positive.generator(0)).scale(QRat.one() / (q.inv() - q))
        expected = heisenberg.embed_second((e * positive.root_torus(0, 2)).scale(1 - q**2))
        failures = []
        if action.act_on_heisenberg(big_e, heisenberg.embed_second(positive.root_torus(0))) != expected:
            failures.append("E.t")
        if not action.act_on_heisenberg(big_e, heisenberg.embed_first(negative.root_torus(0))).is_zero():
            failures.append("E.t'")
        return _outcome("B_q obstruction", 2, failures)

    # --- projector ---

    def _highest_weights(self) -> list[Weight]:
        if self.cartan.rank == 1:
            return [Weight((n,)) for n in self.SL2_WEIGHTS]
        return [self.cartan.zero()] + [
            self.cartan.fundamental_weight(i) for i in range(self.cartan.rank)
        ]

    def _projector_suite(self) -> list[ValidationResult]:
        depth = self.degree if self.cartan.rank == 1 else min(self.degree, 2)
        results = []
        for weight in self._highest_weights():
            results.append(
                self._guarded(
                    f"projector on H({weight})",
                    lambda w=weight: self._projector_checks(w, depth),
                )
            )
        if self.cartan.rank == 1 and depth >= 2:
            results.append(self._guarded("comodule example", self._comodule_example))
        return results

    def _random_vector(self, raw: Any, rng: random.Random) -> ModuleVector:
        weight = rng.choice([w for w in raw.weights if raw.spaces[w]])
        coords = [
            QRat.q_power(rng.randint(-2, 2)) * rng.randint(-3, 3) for _ in range(raw.spaces[weight])
        ]
        return raw.vector(weight, coords)

    def _projector_checks(self, weight: Weight, depth: int) -> ValidationResult:
        name = f"projector on H({weight})"
        module = StandardModule.highest_weight(self.cartan, weight, self.settings)
        raw = module.to_raw(depth)
        negative = module.session.negative
        failures = []
        checked = 0
        v = module.seed_vector(0, depth)
        checked += 1
        if raw.project(v) != v:
            failures.append("P(v) != v")
        for i in range(self.cartan.rank):
            top = depth if self.cartan.rank == 1 else 1
            for n in range(1, top + 1):
                checked += 1
                if not raw.project(module.vector(negative.generator(i) ** n, 0, depth)).is_zero():
                    failures.append(f"P(f{i + 1}^{n} v) != 0")
        rng = random.Random(self.seed)
        for _ in range(self.RANDOM_VECTORS):
            m = self._random_vector(raw, rng)
            image = raw.project(m)
            checked += 1
            if raw.project(image) != image:
                failures.append(f"P^2 != P on {m}")
            if any(not raw.apply_generator("e", i, image).is_zero() for i in range(self.cartan.rank)):
                failures.append(f"P({m}) is not maximal")
            if self.cartan.rank == 1 and image != self._sl2_series(raw, m):
                failures.append(f"series mismatch on {m}")
        for m in self._window_vectors(raw, weight, min(depth, self.COACTION_DEGREE)):
            checked += 1
            if not raw.coaction_law_check(m):
                failures.append(f"coaction law on {m}")
        result = decompose(raw)
        checked += 1
        if result.multiplicities != {weight: 1} or not result.verified:
            failures.append(f"decomposition {result.summary()}")
        return _outcome(name, checked, failures, depth=depth)

    def _window_vectors(self, raw: Any, top: Weight, degree: int) -> list[ModuleVector]:
        """Basis vectors at most degree simple roots below top."""
        vectors = []
        for weight in raw.weights:
            height = self.cartan.height(top - weight)
            if height is not None and 0 <= height <= degree:
                vectors.extend(raw.basis_vectors(weight))
        return vectors

    def _sl2_series(self, raw: Any, m: ModuleVector) -> ModuleVector:
        """sum_n (-1)^n q^-(n(n-1)/2) / [n]! f^n e'^n m."""
        total = m
        moved = m
        n = 0
        while True:
            n += 1
            moved = raw.apply_generator("e", 0, moved)
            if moved.is_zero():
                return total
            lowered = moved
            for _ in range(n):
                lowered = raw.apply_generator("f", 0, lowered)
            coeff = QRat.q_power(-(n * (n - 1) // 2)) / q_fact(n)
            total = total + lowered.scale(-coeff if n % 2 else coeff)

    def _comodule_example(self) -> ValidationResult:
        """rho(f.m) = 1 (x) fm + f (x) (q^-2 fe'm + m) + f^2 (x) e'm when e'^2 m = 0."""
        module = StandardModule.highest_weight(self.cartan, Weight((2,)), self.settings)
        depth = self.degree
        raw = module.to_raw(depth)
        negative = module.session.negative
        f = negative.generator(0)
        m = module.vector(f, 0, depth)
        fm = raw.act(f, m)
        em = raw.apply_generator("e", 0, m)
        fem = raw.act(f, em)
        one, f_key, f2_key = (negative.unit_key(), negative.word((0,)), negative.word((0, 0)))
        terms: dict[Any, QRat] = {}
        pieces = [(one, fm), (f_key, fem.scale(QRat.q_power(-2)) + m), (f2_key, em)]
        for key, vector in pieces:
            for mk, c in vector.terms.items():
                add_into(terms, (key, mk), c)
        expected = ModuleTensor(raw, terms)
        failures = []
        if raw.rho(fm) != expected:
            failures.append(f"rho(f.m) = {raw.rho(fm)}")
        if not raw.compatibility_check(f, m, "pi"):
            failures.append("(pi (x) id)(Delta(f) rho(m))")
        if not raw.compatibility_check(f, m, "braided"):
            failures.append("Delta_0(f) rho(m)")
        if not raw.coaction_law_check(m):
            failures.append("coaction law")
        return _outcome("comodule example", 4, failures)


def main() -> None:
    """Run every suite on A1 from the command line."""
    logger.info("Starting invariant suites...")

    validator = InvariantValidator(cartan_preset("A1"))
    reports = validator.run_all()

    for report in reports:
        print(report.summary())

    if not all(report.all_passed for report in reports):
        logger.warning("Some invariant checks failed")
        raise SystemExit(1)

    logger.info("All invariant checks passed!")


if __name__ == "__main__":
    main()
