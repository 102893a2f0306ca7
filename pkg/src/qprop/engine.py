"""Properties and the batch test runner."""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Any, Sequence

from . import assertions as _a
from .analysis import ExecutionStats, RegisteredAssertion, Sampler, execute_and_evaluate
from .assertions import AssertionVerdict
from .circuit import ALL_BASES, Basis
from .generators import InputGenerator
from .rng import derive_seed
from .simulator import sample_counts

log = logging.getLogger(__name__)

DEFAULT_MAX_ATTEMPTS = 100


class PreconditionTimeout(RuntimeError):
    def __init__(self, property_name: str, ordinal: int, attempts: int):
        self.property_name, self.ordinal, self.attempts = property_name, ordinal, attempts
        super().__init__(
            f"{property_name}: no input satisfied the precondition for ordinal {ordinal} "
            f"after {attempts} attempts"
        )


class Property:
    """Base class for properties.

    Subclasses return their generators from :meth:`input_generators`, may
    filter inputs in :meth:`precondition`, and register assertions on the
    ``checks`` object passed to :meth:`operations`::

        class TeleportationOutputEqualToInput(Property):
            def input_generators(self):
                return [RandomState(1)]

            def operations(self, checks, q0):
                qc = Circuit(3).initialize(q0, [0]).compose(teleportation())
                qc2 = Circuit(1).initialize(q0, [0])
                checks.assert_equal(qc, [2], qc2, [0])
    """

    name: str | None = None

    @property
    def property_name(self) -> str:
        return self.name or type(self).__name__

    def input_generators(self) -> Sequence[InputGenerator]:
        return []

    def precondition(self, *inputs) -> bool:
        return True

    def operations(self, checks: Checks, *inputs) -> None:
        raise NotImplementedError

    def signature(self) -> tuple:
        return tuple(g.signature for g in self.input_generators())


class Checks:
    """Accumulating assertion sink handed to one ``operations`` call."""

    def __init__(self):
        self.registered: list[_a.Assertion] = []

    def add(self, assertion: _a.Assertion) -> _a.Assertion:
        self.registered.append(assertion)
        return assertion

    def assert_equal(self, circ_a, qubits_a, circ_b, qubits_b, bases=ALL_BASES):
        return self.add(_a.assert_equal(circ_a, qubits_a, circ_b, qubits_b, bases))

    def assert_different(self, circ_a, qubits_a, circ_b, qubits_b, bases=ALL_BASES):
        return self.add(_a.assert_different(circ_a, qubits_a, circ_b, qubits_b, bases))

    def assert_entangled(self, circ, qubits, basis=Basis.Z):
        return self.add(_a.assert_entangled(circ, qubits, basis))

    def assert_separable(self, circ, qubits, basis=Basis.Z):
        return self.add(_a.assert_separable(circ, qubits, basis))

    def assert_probability(self, circ, qubits, probs_of_zero, basis=Basis.Z):
        return self.add(_a.assert_probability(circ, qubits, probs_of_zero, basis))

    def assert_most_frequent(self, circ, qubits, expected_outcome, basis=Basis.Z):
        return self.add(_a.assert_most_frequent(circ, qubits, expected_outcome, basis))


@dataclass(frozen=True)
class TestConfig:
    num_inputs: int = 64
    shots: int = 1600
    family_alpha: float = 0.05
    max_precondition_attempts: int = DEFAULT_MAX_ATTEMPTS
    base_seed: int = 0

    __test__ = False  # not a pytest class

    def __post_init__(self):
        if self.num_inputs < 1:
            raise ValueError("num_inputs must be at least 1")
        if self.shots < 1:
            raise ValueError("shots must be at least 1")
        if not 0 < self.family_alpha < 1:
            raise ValueError("family_alpha must lie strictly between 0 and 1")
        if self.max_precondition_attempts < 1:
            raise ValueError("max_precondition_attempts must be at least 1")


def candidate_seed(base_seed: int, signature: tuple, ordinal: int, attempt: int) -> int:
    return derive_seed(base_seed, "input", signature, ordinal, attempt)


def materialize(p: Property, seed: int) -> list[Any]:
    """The inputs a property receives for one test-case seed."""
    return [g.generate(derive_seed(seed, "generator", k)) for k, g in enumerate(p.input_generators())]


def generate_inputs(p: Property, cfg: TestConfig) -> list[tuple[int, list[Any]]]:
    """``cfg.num_inputs`` accepted ``(seed, inputs)`` pairs.

    Candidate seeds depend only on ``(base_seed, generator signature,
    ordinal, attempt)``, so properties with the same generators see the
    same inputs until one of them rejects a candidate.
    """
    sig = p.signature()
    out = []
    for ordinal in range(cfg.num_inputs):
        for attempt in range(cfg.max_precondition_attempts):
            seed = candidate_seed(cfg.base_seed, sig, ordinal, attempt)
            inputs = materialize(p, seed)
            if p.precondition(*inputs):
                out.append((seed, inputs))
                break
        else:
            raise PreconditionTimeout(p.property_name, ordinal, cfg.max_precondition_attempts)
    return out


@dataclass
class PropertyResult:
    name: str
    passed: bool
    verdicts: list[AssertionVerdict] = field(default_factory=list)
    seeds: list[int] = field(default_factory=list)
    error: str = ""

    @property
    def failing_seeds(self) -> list[int]:
        return sorted({v.seed for v in self.verdicts if not v.passed and v.seed is not None})

    @property
    def execution_error(self) -> bool:
        return bool(self.error) or any(v.error for v in self.verdicts)


@dataclass
class SuiteResult:
    properties: list[PropertyResult]
    duration_s: float
    stats: ExecutionStats
    config: TestConfig

    @property
    def passed(self) -> bool:
        return all(p.passed for p in self.properties)

    @property
    def verdicts(self) -> list[AssertionVerdict]:
        return [v for p in self.properties for v in p.verdicts]

    def __getitem__(self, name: str) -> PropertyResult:
        for p in self.properties:
            if p.name == name:
                return p
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "duration_s": self.duration_s,
            "config": self.config.__dict__,
            "stats": self.stats.__dict__,
            "properties": [
                {
                    "name": p.name,
                    "passed": p.passed,
                    "error": p.error,
                    "seeds": p.seeds,
                    "failing_seeds": p.failing_seeds,
                    "verdicts": [v.to_dict() for v in p.verdicts],
                }
                for p in self.properties
            ],
        }


def _register(p: Property, index: int, cases, sink: list[RegisteredAssertion]) -> list[AssertionVerdict]:
    """Run ``operations`` for each case; returns execution-error verdicts."""
    errors = []
    for ordinal, (seed, inputs) in cases:
        checks = Checks()
        try:
            p.operations(checks, *inputs)
        except Exception as exc:
            log.debug("operations of %s raised on input %d", p.property_name, ordinal, exc_info=True)
            errors.append(
                AssertionVerdict(
                    assertion_id=f"{p.property_name}#{ordinal}.error",
                    kind="ExecutionError",
                    passed=False,
                    property_name=p.property_name,
                    input_ordinal=ordinal,
                    seed=seed,
                    detail=f"operations raised {type(exc).__name__}: {exc}",
                    error=True,
                )
            )
            continue
        for k, assertion in enumerate(checks.registered):
            sink.append(RegisteredAssertion(assertion, p.property_name, ordinal, k, seed, index))
    return errors


def run_suite(
    properties: Sequence[Property],
    cfg: TestConfig,
    backend: Sampler = sample_counts,
    stats: ExecutionStats | None = None,
) -> SuiteResult:
    """Generate every input, run every operations body, then evaluate all assertions together."""
    if not properties:
        raise ValueError("run_suite needs at least one property")
    names = [p.property_name for p in properties]
    if len(set(names)) != len(names):
        raise ValueError(f"property names must be unique, got {names}")
    start = time.perf_counter()
    stats = stats if stats is not None else ExecutionStats()
    sink: list[RegisteredAssertion] = []
    results: dict[str, PropertyResult] = {}
    early: dict[str, list[AssertionVerdict]] = {}
    for index, p in enumerate(properties):
        name = p.property_name
        try:
            cases = generate_inputs(p, cfg)
        except PreconditionTimeout as exc:
            results[name] = PropertyResult(name, False, [], [], error=str(exc))
            continue
        except Exception as exc:
            results[name] = PropertyResult(name, False, [], [], error=f"input generation failed: {exc}")
            continue
        results[name] = PropertyResult(name, True, [], [s for s, _ in cases])
        early[name] = _register(p, index, list(enumerate(cases)), sink)

    verdicts = execute_and_evaluate(sink, cfg.shots, cfg.family_alpha, derive_seed(cfg.base_seed, "sampling"), backend, stats)
    for v in verdicts:
        results[v.property_name].verdicts.append(v)
    for name, errs in early.items():
        results[name].verdicts.extend(errs)
    for r in results.values():
        r.verdicts.sort(key=lambda v: (v.input_ordinal, v.assertion_id))
        if r.error or any(not v.passed for v in r.verdicts):
            r.passed = False
    return SuiteResult([results[n] for n in names], time.perf_counter() - start, stats, cfg)


def reproduce(p: Property, seed: int, cfg: TestConfig, backend: Sampler = sample_counts) -> list[AssertionVerdict]:
    """Re-run one test case from its input seed.

    Only the inputs are pinned by the seed; the Holm family here holds just
    this case's tests, so borderline verdicts can differ from the full run.
    """
    inputs = materialize(p, seed)
    sink: list[RegisteredAssertion] = []
    errors = _register(p, 0, [(0, (seed, inputs))], sink)
    verdicts = execute_and_evaluate(sink, cfg.shots, cfg.family_alpha, derive_seed(cfg.base_seed, "sampling"), backend)
    return verdicts + errors
