"""Statistical assertions over measured circuits.

An assertion names the measurements it needs (:class:`MeasurementRequirement`),
turns the resulting counts into p-values, and decides pass/fail once the
suite-wide Holm correction has said which tests are rejected.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .circuit import ALL_BASES, Basis, Circuit
from .simulator import Counts
from .stats import binomial_two_sided, fisher_exact_two_sided


class InvalidAssertion(ValueError):
    """Invalid assertion arguments."""


class AssertionKind(enum.Enum):
    EQUAL = "Equal"
    DIFFERENT = "Different"
    ENTANGLED = "Entangled"
    SEPARABLE = "Separable"
    PROBABILITY = "Probability"
    MOST_FREQUENT = "MostFrequent"


@dataclass(frozen=True)
class MeasurementRequirement:
    """Measure ``qubits`` of ``circuit`` in ``basis``.

    Per-qubit assertions use one qubit; joint assertions (entangled,
    separable, most-frequent) use a group that must be read in one shot.
    """

    circuit: Circuit
    qubits: tuple[int, ...]
    basis: Basis

    @property
    def digest(self) -> str:
        return self.circuit.digest

    @property
    def key(self) -> tuple:
        return (self.circuit.digest, self.qubits, self.basis.value)

    def __eq__(self, other):
        return isinstance(other, MeasurementRequirement) and self.key == other.key

    def __hash__(self):
        return hash(self.key)


CountsLookup = Callable[[MeasurementRequirement], Counts]


@dataclass
class AssertionVerdict:
    assertion_id: str
    kind: str
    passed: bool
    property_name: str = ""
    input_ordinal: int = -1
    seed: int | None = None
    pvalues: dict[str, float] = field(default_factory=dict)
    thresholds: dict[str, float] = field(default_factory=dict)
    rejected: list[str] = field(default_factory=list)
    detail: str = ""
    error: bool = False

    def to_dict(self) -> dict:
        return {
            "assertion_id": self.assertion_id,
            "kind": self.kind,
            "passed": self.passed,
            "property": self.property_name,
            "input_ordinal": self.input_ordinal,
            "seed": self.seed,
            "pvalues": self.pvalues,
            "thresholds": self.thresholds,
            "rejected": self.rejected,
            "detail": self.detail,
            "error": self.error,
        }


def _check_circuit(c: Circuit, qubits: Sequence[int], what: str):
    if not isinstance(c, Circuit):
        raise InvalidAssertion(f"{what} expects a Circuit, got {type(c).__name__}")
    if c.has_measurements():
        raise InvalidAssertion(f"{what} needs measurement-free circuits; the assertion adds measurements")
    if len(set(qubits)) != len(qubits):
        raise InvalidAssertion(f"{what}: duplicate qubit indices {list(qubits)}")
    for q in qubits:
        if not 0 <= q < c.num_qubits:
            raise InvalidAssertion(f"{what}: qubit {q} out of range for a {c.num_qubits}-qubit circuit")


def _zero_one(counts: Counts) -> tuple[int, int]:
    return counts["0"], counts["1"]


class Assertion:
    kind: AssertionKind

    def requirements(self) -> list[MeasurementRequirement]:
        raise NotImplementedError

    def tests(self, counts: CountsLookup) -> list[tuple[str, float]]:
        """``(label, p)`` for each statistical test; empty for non-statistical kinds."""
        return []

    def decide(self, counts: CountsLookup, pvalues: dict[str, float], rejected: set[str]) -> tuple[bool, str]:
        raise NotImplementedError

    @property
    def statistical(self) -> bool:
        return self.kind in (AssertionKind.EQUAL, AssertionKind.DIFFERENT, AssertionKind.PROBABILITY)


class AssertEqual(Assertion):
    """Per qubit pair and basis, Fisher's exact test on the 0/1 marginal counts."""

    def __init__(self, circ_a: Circuit, qubits_a, circ_b: Circuit, qubits_b, bases=ALL_BASES, different=False):
        qubits_a, qubits_b = tuple(int(q) for q in qubits_a), tuple(int(q) for q in qubits_b)
        name = "assert_different" if different else "assert_equal"
        if len(qubits_a) != len(qubits_b):
            raise InvalidAssertion(f"{name}: qubit lists differ in length ({len(qubits_a)} vs {len(qubits_b)})")
        if not qubits_a:
            raise InvalidAssertion(f"{name}: no qubits given")
        _check_circuit(circ_a, qubits_a, name)
        _check_circuit(circ_b, qubits_b, name)
        bases = tuple(Basis(b) if isinstance(b, str) else b for b in bases)
        if not bases or len(set(bases)) != len(bases):
            raise InvalidAssertion(f"{name}: bases must be a non-empty list without repeats")
        self.kind = AssertionKind.DIFFERENT if different else AssertionKind.EQUAL
        self.circ_a, self.qubits_a, self.circ_b, self.qubits_b, self.bases = circ_a, qubits_a, circ_b, qubits_b, bases

    def _pairs(self):
        for qa, qb in zip(self.qubits_a, self.qubits_b):
            for basis in self.bases:
                yield (
                    f"q{qa}~q{qb}:{basis.value}",
                    MeasurementRequirement(self.circ_a, (qa,), basis),
                    MeasurementRequirement(self.circ_b, (qb,), basis),
                )

    def requirements(self):
        out = []
        for _, ra, rb in self._pairs():
            out += [ra, rb]
        return out

    def tests(self, counts):
        out = []
        for label, ra, rb in self._pairs():
            a0, a1 = _zero_one(counts(ra))
            b0, b1 = _zero_one(counts(rb))
            out.append((label, fisher_exact_two_sided([[a0, a1], [b0, b1]])))
        return out

    def decide(self, counts, pvalues, rejected):
        hits = [label for label in pvalues if label in rejected]
        if self.kind is AssertionKind.EQUAL:
            if not hits:
                return True, ""
            parts = []
            for label, ra, rb in self._pairs():
                if label in hits:
                    a0, a1 = _zero_one(counts(ra))
                    b0, b1 = _zero_one(counts(rb))
                    parts.append(
                        f"{label} differs: P(0) {a0 / (a0 + a1):.3f} vs {b0 / (b0 + b1):.3f} (p={pvalues[label]:.3g})"
                    )
            return False, "; ".join(parts)
        if hits:
            return True, ""
        return False, "no qubit/basis comparison was significantly different (min p=%.3g)" % min(pvalues.values())


class AssertEntangled(Assertion):
    """Exactly two outcomes, each seen, and bitwise complements of each other."""

    def __init__(self, circ: Circuit, qubits, basis=Basis.Z, negate=False):
        qubits = tuple(int(q) for q in qubits)
        name = "assert_separable" if negate else "assert_entangled"
        if len(qubits) < 2:
            raise InvalidAssertion(f"{name} needs at least two qubits")
        _check_circuit(circ, qubits, name)
        self.kind = AssertionKind.SEPARABLE if negate else AssertionKind.ENTANGLED
        self.req = MeasurementRequirement(circ, qubits, Basis(basis))

    def requirements(self):
        return [self.req]

    def decide(self, counts, pvalues, rejected):
        observed = sorted(k for k, v in counts(self.req).items() if v > 0)
        entangled = (
            len(observed) == 2
            and all(x != y for x, y in zip(observed[0], observed[1]))
        )
        outcomes = ", ".join(f"{k}:{counts(self.req)[k]}" for k in observed)
        if self.kind is AssertionKind.ENTANGLED:
            return (True, "") if entangled else (False, f"outcomes not a complementary pair: {outcomes}")
        return (True, "") if not entangled else (False, f"complementary outcome pair observed: {outcomes}")


class AssertProbability(Assertion):
    """Exact binomial test of each qubit's zero count against a target P(0)."""

    def __init__(self, circ: Circuit, qubits, probs_of_zero, basis=Basis.Z):
        qubits = tuple(int(q) for q in qubits)
        probs = tuple(float(p) for p in probs_of_zero)
        if len(probs) != len(qubits):
            raise InvalidAssertion("assert_probability: one target probability per qubit required")
        if any(not 0.0 <= p <= 1.0 for p in probs):
            raise InvalidAssertion(f"assert_probability: targets must lie in [0, 1], got {probs}")
        _check_circuit(circ, qubits, "assert_probability")
        self.kind = AssertionKind.PROBABILITY
        self.basis = Basis(basis)
        self.reqs = [MeasurementRequirement(circ, (q,), self.basis) for q in qubits]
        self.targets = probs

    def requirements(self):
        return list(self.reqs)

    def _label(self, req):
        return f"q{req.qubits[0]}:{self.basis.value}"

    def tests(self, counts):
        out = []
        for req, target in zip(self.reqs, self.targets):
            c = counts(req)
            out.append((self._label(req), binomial_two_sided(c["0"], c.total_shots, target)))
        return out

    def decide(self, counts, pvalues, rejected):
        parts = []
        for req, target in zip(self.reqs, self.targets):
            label = self._label(req)
            if label in rejected:
                c = counts(req)
                parts.append(f"{label} P(0) observed {c['0'] / c.total_shots:.3f}, expected {target:.3f} (p={pvalues[label]:.3g})")
        return (not parts), "; ".join(parts)


class AssertMostFrequent(Assertion):
    """The expected joint outcome must be the unique most frequent one (no test)."""

    def __init__(self, circ: Circuit, qubits, expected_outcome: str, basis=Basis.Z):
        qubits = tuple(int(q) for q in qubits)
        if not isinstance(expected_outcome, str) or len(expected_outcome) != len(qubits) or set(expected_outcome) - {"0", "1"}:
            raise InvalidAssertion(
                f"assert_most_frequent: expected outcome {expected_outcome!r} must be a {len(qubits)}-character bitstring"
            )
        if not qubits:
            raise InvalidAssertion("assert_most_frequent: no qubits given")
        _check_circuit(circ, qubits, "assert_most_frequent")
        self.kind = AssertionKind.MOST_FREQUENT
        self.req = MeasurementRequirement(circ, qubits, Basis(basis))
        self.expected = expected_outcome

    def requirements(self):
        return [self.req]

    def decide(self, counts, pvalues, rejected):
        c = counts(self.req)
        top = c.most_frequent()
        if top == [self.expected]:
            return True, ""
        return False, f"most frequent {top} ({c[top[0]]} shots), expected {self.expected} ({c[self.expected]} shots)"


# -- factories ------------------------------------------------------------------

def assert_equal(circ_a, qubits_a, circ_b, qubits_b, bases=ALL_BASES) -> AssertEqual:
    return AssertEqual(circ_a, qubits_a, circ_b, qubits_b, bases)


def assert_different(circ_a, qubits_a, circ_b, qubits_b, bases=ALL_BASES) -> AssertEqual:
    return AssertEqual(circ_a, qubits_a, circ_b, qubits_b, bases, different=True)


def assert_entangled(circ, qubits, basis=Basis.Z) -> AssertEntangled:
    return AssertEntangled(circ, qubits, basis)


def assert_separable(circ, qubits, basis=Basis.Z) -> AssertEntangled:
    return AssertEntangled(circ, qubits, basis, negate=True)


def assert_probability(circ, qubits, probs_of_zero, basis=Basis.Z) -> AssertProbability:
    return AssertProbability(circ, qubits, probs_of_zero, basis)


def assert_most_frequent(circ, qubits, expected_outcome, basis=Basis.Z) -> AssertMostFrequent:
    return AssertMostFrequent(circ, qubits, expected_outcome, basis)
