"""Circuit-level mutants and mutation scores.

Faulty mutants come from one gate insertion, deletion or replacement.
Equivalent mutants insert an identity pair, so any kill on them is a
statistical false positive.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .circuit import Circuit, Gate, GateKind
from .rng import make_rng
from .simulator import circuit_unitary, equal_up_to_global_phase, statevector

MAX_ATTEMPTS = 1000
UNITARY_CHECK_QUBITS = 6

# gates GateInsert and GateReplace may draw from
INSERTABLE = tuple(k for k in GateKind if k.num_qubits <= 2)

IDENTITY_PAIRS: tuple[tuple[GateKind, GateKind], ...] = (
    (GateKind.H, GateKind.H),
    (GateKind.X, GateKind.X),
    (GateKind.Y, GateKind.Y),
    (GateKind.Z, GateKind.Z),
    (GateKind.S, GateKind.SDG),
    (GateKind.T, GateKind.TDG),
    (GateKind.CX, GateKind.CX),
    (GateKind.SWAP, GateKind.SWAP),
)


class MutationError(RuntimeError):
    pass


class MutationOperator(enum.Enum):
    GATE_INSERT = "GateInsert"
    GATE_DELETE = "GateDelete"
    GATE_REPLACE = "GateReplace"
    IDENTITY_INSERT = "IdentityInsert"


class MutantKind(enum.Enum):
    FAULTY = "faulty"
    EQUIVALENT = "equivalent"


@dataclass(frozen=True)
class MutantRecord:
    id: str
    kind: MutantKind
    base_digest: str
    circuit: Circuit
    operator: MutationOperator
    description: str
    seed: int

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind.value,
            "base_digest": self.base_digest,
            "digest": self.circuit.digest,
            "operator": self.operator.value,
            "description": self.description,
            "seed": self.seed,
        }


def _random_gate(rng, num_qubits: int, kinds: Sequence[GateKind]) -> Gate:
    kind = kinds[int(rng.integers(len(kinds)))]
    qubits = tuple(int(q) for q in rng.choice(num_qubits, size=kind.num_qubits, replace=False))
    params = tuple(float(a) for a in rng.uniform(0, 2 * math.pi, size=kind.num_params))
    return Gate(kind, qubits, params)


def _with_ops(c: Circuit, ops) -> Circuit:
    return Circuit(c.num_qubits, tuple(ops), c.global_phase)


def _describe(g: Gate) -> str:
    params = "(" + ",".join(f"{p:.4f}" for p in g.params) + ")" if g.params else ""
    return f"{g.kind.value}{params} on {list(g.qubits)}"


def apply_operator(c: Circuit, op: MutationOperator, rng) -> tuple[Circuit, str]:
    """One seeded mutation of ``c``; returns the mutant and a description."""
    ops = list(c.ops)
    gate_sites = [i for i, e in enumerate(ops) if isinstance(e, Gate)]
    if op is MutationOperator.GATE_INSERT:
        kinds = INSERTABLE if c.num_qubits >= 2 else tuple(k for k in INSERTABLE if k.num_qubits == 1)
        site = int(rng.integers(len(ops) + 1))
        g = _random_gate(rng, c.num_qubits, kinds)
        ops.insert(site, g)
        return _with_ops(c, ops), f"insert {_describe(g)} at {site}"
    if not gate_sites:
        raise MutationError(f"{op.value} needs at least one gate")
    site = gate_sites[int(rng.integers(len(gate_sites)))]
    old = ops[site]
    if op is MutationOperator.GATE_DELETE:
        del ops[site]
        return _with_ops(c, ops), f"delete {_describe(old)} at {site}"
    if op is MutationOperator.GATE_REPLACE:
        # same arity, same qubits, different kind
        kinds = [k for k in INSERTABLE if k.num_qubits == old.kind.num_qubits and k is not old.kind]
        if not kinds:
            kinds = [old.kind]
        kind = kinds[int(rng.integers(len(kinds)))]
        params = tuple(float(a) for a in rng.uniform(0, 2 * math.pi, size=kind.num_params))
        new = Gate(kind, old.qubits, params)
        ops[site] = new
        return _with_ops(c, ops), f"replace {_describe(old)} with {_describe(new)} at {site}"
    raise ValueError(f"unsupported faulty operator {op}")


def same_state_from_zero(a: Circuit, b: Circuit) -> bool:
    return equal_up_to_global_phase(statevector(a).amplitudes, statevector(b).amplitudes)


def unitarily_equal(a: Circuit, b: Circuit) -> bool:
    if a.num_qubits <= UNITARY_CHECK_QUBITS:
        return equal_up_to_global_phase(circuit_unitary(a), circuit_unitary(b))
    return same_state_from_zero(a, b)


def generate_faulty_mutants(c: Circuit, n: int, seed: int, prefix: str = "f") -> list[MutantRecord]:
    """``n`` distinct mutants whose state from |0...0> differs from ``c``'s."""
    if not c.gates:
        raise MutationError("cannot mutate an empty circuit")
    operators = (MutationOperator.GATE_INSERT, MutationOperator.GATE_DELETE, MutationOperator.GATE_REPLACE)
    out: list[MutantRecord] = []
    seen = {c.digest}
    for attempt in range(MAX_ATTEMPTS):
        if len(out) == n:
            break
        rng = make_rng(seed, "faulty", attempt)
        op = operators[int(rng.integers(len(operators)))]
        mutant, desc = apply_operator(c, op, rng)
        if mutant.digest in seen or same_state_from_zero(mutant, c):
            continue
        seen.add(mutant.digest)
        out.append(MutantRecord(f"{prefix}{len(out):02d}", MutantKind.FAULTY, c.digest, mutant, op, desc, attempt))
    if len(out) < n:
        raise MutationError(f"only {len(out)} of {n} faulty mutants found in {MAX_ATTEMPTS} attempts")
    return out


def generate_equivalent_mutants(c: Circuit, n: int, seed: int, prefix: str = "e") -> list[MutantRecord]:
    """``n`` distinct mutants, each ``c`` with one identity pair inserted."""
    if c.num_qubits < 1:
        raise MutationError("circuit has no qubits")
    pairs = [p for p in IDENTITY_PAIRS if p[0].num_qubits <= c.num_qubits]
    out: list[MutantRecord] = []
    seen = {c.digest}
    for attempt in range(MAX_ATTEMPTS):
        if len(out) == n:
            break
        rng = make_rng(seed, "equivalent", attempt)
        first, second = pairs[int(rng.integers(len(pairs)))]
        qubits = tuple(int(q) for q in rng.choice(c.num_qubits, size=first.num_qubits, replace=False))
        site = int(rng.integers(len(c.ops) + 1))
        ops = list(c.ops)
        ops[site:site] = [Gate(first, qubits), Gate(second, qubits)]
        mutant = _with_ops(c, ops)
        if mutant.digest in seen:
            continue
        if not unitarily_equal(mutant, c):
            raise MutationError(f"identity pair {first.value}.{second.value} changed the circuit")
        seen.add(mutant.digest)
        desc = f"insert {first.value}.{second.value} on {list(qubits)} at {site}"
        out.append(
            MutantRecord(f"{prefix}{len(out):02d}", MutantKind.EQUIVALENT, c.digest, mutant, MutationOperator.IDENTITY_INSERT, desc, attempt)
        )
    if len(out) < n:
        raise MutationError(f"only {len(out)} of {n} equivalent mutants found in {MAX_ATTEMPTS} attempts")
    return out


def mutation_score(killed: Iterable[bool]) -> float:
    """Fraction killed. On equivalent mutants this is the false-positive rate."""
    flags = list(killed)
    if not flags:
        raise ValueError("mutation_score of an empty row set")
    return sum(bool(k) for k in flags) / len(flags)
