"""Measurement planning and suite-wide evaluation of registered assertions.

Pipeline: collect assertions in canonical order, deduplicate circuits by
digest, pack measurements greedily into as few circuit copies as possible,
sample each copy once, compute p-values, run one Holm family over every
statistical test in the suite, then apply each assertion's verdict rule.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .assertions import Assertion, AssertionVerdict, MeasurementRequirement
from .circuit import Basis, Circuit
from .rng import derive_seed
from .simulator import Counts, sample_counts
from .stats import holm_bonferroni

log = logging.getLogger(__name__)

Sampler = Callable[[Circuit, int, int], Counts]


@dataclass
class RegisteredAssertion:
    """An assertion plus where it came from; ``order`` is the canonical sort key."""

    assertion: Assertion
    property_name: str
    input_ordinal: int
    assertion_ordinal: int
    seed: int | None = None
    property_index: int = 0

    @property
    def order(self) -> tuple:
        return (self.property_index, self.property_name, self.input_ordinal, self.assertion_ordinal)

    @property
    def assertion_id(self) -> str:
        return f"{self.property_name}#{self.input_ordinal}.{self.assertion_ordinal}"


@dataclass
class CircuitEntry:
    circuit: Circuit
    copies: list[dict[int, Basis]] = field(default_factory=list)


@dataclass
class MeasurementPlan:
    entries: dict[str, CircuitEntry] = field(default_factory=dict)
    placement: dict[tuple, tuple[str, int]] = field(default_factory=dict)
    requirements: list[MeasurementRequirement] = field(default_factory=list)

    @property
    def num_copies(self) -> int:
        return sum(len(e.copies) for e in self.entries.values())

    def copy_circuit(self, digest: str, index: int) -> Circuit:
        entry = self.entries[digest]
        c = entry.circuit
        for q, basis in sorted(entry.copies[index].items()):
            c = c.measure(q, basis, clbit=q)
        return c

    def check(self):
        """Raise if a packing invariant is violated."""
        for req in self.requirements:
            digest, idx = self.placement[req.key]
            copy = self.entries[digest].copies[idx]
            for q in req.qubits:
                if copy.get(q) is not req.basis:
                    raise AssertionError(f"requirement {req.key} not satisfied by copy {idx}")
        for digest, entry in self.entries.items():
            seen = set()
            for copy in entry.copies:
                key = frozenset((q, b.value) for q, b in copy.items())
                if key in seen:
                    raise AssertionError(f"duplicate copy for circuit {digest}")
                seen.add(key)


@dataclass
class ExecutionStats:
    distinct_circuits: int = 0
    circuit_copies: int = 0
    shots_sampled: int = 0
    requirements: int = 0
    baseline_copies: int = 0
    baseline_shots: int = 0
    statistical_tests: int = 0


def collect(registered: Iterable[RegisteredAssertion]) -> tuple[list[RegisteredAssertion], list[MeasurementRequirement]]:
    """Canonically order the assertions and list their requirements (with repeats)."""
    ordered = sorted(registered, key=lambda r: r.order)
    reqs = [req for r in ordered for req in r.assertion.requirements()]
    return ordered, reqs


def deduplicate_circuits(reqs: Sequence[MeasurementRequirement]) -> MeasurementPlan:
    plan = MeasurementPlan()
    seen = set()
    for req in reqs:
        if req.digest not in plan.entries:
            plan.entries[req.digest] = CircuitEntry(req.circuit)
        if req.key not in seen:
            seen.add(req.key)
            plan.requirements.append(req)
    return plan


def greedy_insert_measurements(plan: MeasurementPlan) -> MeasurementPlan:
    """First-fit packing: a requirement joins the first copy whose qubits are free
    or already read in the same basis, otherwise it opens a new copy."""
    for req in plan.requirements:
        entry = plan.entries[req.digest]
        for idx, copy in enumerate(entry.copies):
            if all(copy.get(q, req.basis) is req.basis for q in req.qubits):
                break
        else:
            entry.copies.append({})
            idx = len(entry.copies) - 1
        for q in req.qubits:
            entry.copies[idx][q] = req.basis
        plan.placement[req.key] = (req.digest, idx)
    # drop copies whose measurement sets repeat an earlier copy
    for digest, entry in plan.entries.items():
        keep: list[dict[int, Basis]] = []
        remap: dict[int, int] = {}
        index_of: dict[frozenset, int] = {}
        for i, copy in enumerate(entry.copies):
            key = frozenset((q, b.value) for q, b in copy.items())
            if key not in index_of:
                index_of[key] = len(keep)
                keep.append(copy)
            remap[i] = index_of[key]
        if len(keep) != len(entry.copies):
            entry.copies = keep
            for rk, (d, i) in list(plan.placement.items()):
                if d == digest:
                    plan.placement[rk] = (d, remap[i])
    return plan


def build_plan(reqs: Sequence[MeasurementRequirement]) -> MeasurementPlan:
    return greedy_insert_measurements(deduplicate_circuits(reqs))


def copy_seed(seed: int, digest: str, copy: dict[int, Basis]) -> int:
    """Sampling seed for one circuit copy, keyed by its content rather than position."""
    return derive_seed(seed, "copy", digest, tuple(sorted((q, b.value) for q, b in copy.items())))


def execute_and_evaluate(
    registered: Iterable[RegisteredAssertion],
    shots: int,
    family_alpha: float,
    seed: int,
    sampler: Sampler = sample_counts,
    stats: ExecutionStats | None = None,
) -> list[AssertionVerdict]:
    ordered, reqs = collect(registered)
    plan = build_plan(reqs)
    if stats is None:
        stats = ExecutionStats()
    stats.distinct_circuits += len(plan.entries)
    stats.requirements += len(reqs)
    stats.baseline_copies += len(reqs)
    stats.baseline_shots += len(reqs) * shots

    results: dict[tuple[str, int], Counts] = {}
    failures: dict[str, str] = {}
    for digest, entry in plan.entries.items():
        for idx, copy in enumerate(entry.copies):
            try:
                results[digest, idx] = sampler(plan.copy_circuit(digest, idx), shots, copy_seed(seed, digest, copy))
            except Exception as exc:  # surfaced on the owning assertions
                failures[digest] = f"{type(exc).__name__}: {exc}"
                log.debug("execution of %s copy %d failed: %s", digest, idx, exc)
                continue
            stats.circuit_copies += 1
            stats.shots_sampled += shots

    marginals: dict[tuple, Counts] = {}

    def counts_for(req: MeasurementRequirement) -> Counts:
        got = marginals.get(req.key)
        if got is None:
            got = results[plan.placement[req.key]].marginal(req.qubits)
            marginals[req.key] = got
        return got

    # statistical tests, one suite-wide family
    family: list[tuple[tuple[int, str], float]] = []
    per_assertion: list[dict[str, float] | None] = []
    errors: list[str] = []
    for i, reg in enumerate(ordered):
        broken = [failures[r.digest] for r in reg.assertion.requirements() if r.digest in failures]
        if broken:
            per_assertion.append(None)
            errors.append(broken[0])
            continue
        try:
            tests = reg.assertion.tests(counts_for)
        except Exception as exc:
            per_assertion.append(None)
            errors.append(f"{type(exc).__name__}: {exc}")
            continue
        per_assertion.append(dict(tests))
        errors.append("")
        family.extend(((i, label), p) for label, p in tests)
    stats.statistical_tests += len(family)
    holm = holm_bonferroni(family, family_alpha)

    verdicts = []
    for i, reg in enumerate(ordered):
        base = dict(
            assertion_id=reg.assertion_id,
            kind=reg.assertion.kind.value,
            property_name=reg.property_name,
            input_ordinal=reg.input_ordinal,
            seed=reg.seed,
        )
        pvals = per_assertion[i]
        if pvals is None:
            verdicts.append(AssertionVerdict(passed=False, detail=f"execution error: {errors[i]}", error=True, **base))
            continue
        rejected = {label for label in pvals if (i, label) in holm.rejected}
        thresholds = {label: holm.thresholds[(i, label)] for label in pvals}
        passed, detail = reg.assertion.decide(counts_for, pvals, rejected)
        verdicts.append(
            AssertionVerdict(
                passed=passed,
                pvalues=pvals,
                thresholds=thresholds,
                rejected=sorted(rejected),
                detail=detail,
                **base,
            )
        )
    return verdicts
