"""Quantum phase estimation.

Counting qubits are ``0..m-1`` (qubit 0 is the least significant bit of the
estimate); the unitary acts on the qubits after them. The fixed inverse-QFT
stage is the program under test.
"""
from __future__ import annotations

import math

import numpy as np

from ..circuit import Circuit, GateKind
from ..generators import RandomInt, RandomUnitary
from ..simulator import circuit_unitary
from ..synthesis import controlled, synthesize
from .base import AlgorithmFixture, ProgramProperty
from .qft import build_qft

DEFAULT_COUNTING = 3


def controlled_power(unitary: Circuit, power: int, control: int, targets: list[int], width: int) -> Circuit:
    """Controlled ``unitary ** power`` on a ``width``-qubit register."""
    ops = unitary.ops
    if len(ops) == 1 and ops[0].kind is GateKind.P and not unitary.global_phase:
        return Circuit(width).cp(ops[0].params[0] * power, control, targets[ops[0].qubits[0]])
    body = synthesize(np.linalg.matrix_power(circuit_unitary(unitary), power))
    return controlled(body, control, targets, width)


def build_qpe(m: int, unitary: Circuit, eigenstate, program: Circuit | None = None) -> Circuit:
    if not 1 <= m <= 8:
        raise ValueError(f"build_qpe supports 1..8 counting qubits, got {m}")
    if unitary.num_qubits > 2:
        raise ValueError("build_qpe supports unitaries on at most 2 qubits")
    program = build_qft(m).inverse() if program is None else program
    if program.num_qubits != m:
        raise ValueError(f"inverse-QFT stage has {program.num_qubits} qubits, expected {m}")
    t = unitary.num_qubits
    width = m + t
    targets = list(range(m, width))
    c = Circuit(width).initialize(eigenstate, targets)
    for j in range(m):
        c = c.h(j)
    for j in range(m):
        c = c.compose(controlled_power(unitary, 2 ** j, j, targets, width))
    return c.compose(program, list(range(m)))


def phase_unitary(k: int, m: int) -> Circuit:
    return Circuit(1).p(2 * math.pi * k / 2 ** m, 0)


def bits_lsb_first(k: int, m: int) -> str:
    return "".join(str((k >> j) & 1) for j in range(m))


class QPEExactPhase(ProgramProperty):
    def input_generators(self):
        return [RandomInt(0, 2 ** self.program.num_qubits - 1)]

    def operations(self, checks, k):
        m = self.program.num_qubits
        qc = build_qpe(m, phase_unitary(k, m), [0, 1], self.program)
        checks.assert_most_frequent(qc, list(range(m)), bits_lsb_first(k, m))


class QPEZeroPhase(ProgramProperty):
    """|0> is a phase-1 eigenvector of any P gate, so the estimate is 0."""

    def input_generators(self):
        return [RandomInt(1, 255)]

    def operations(self, checks, r):
        m = self.program.num_qubits
        u = Circuit(1).p(2 * math.pi * r / 256, 0)
        qc = build_qpe(m, u, [1, 0], self.program)
        checks.assert_probability(qc, list(range(m)), [1.0] * m)


class QPEEigenstatePreserved(ProgramProperty):
    def input_generators(self):
        return [RandomUnitary(1)]

    def operations(self, checks, u):
        m = self.program.num_qubits
        _, vecs = np.linalg.eig(circuit_unitary(u))
        eigvec = vecs[:, 0] / np.linalg.norm(vecs[:, 0])
        qc = build_qpe(m, u, eigvec, self.program)
        ref = Circuit(1).initialize(eigvec, [0])
        checks.assert_equal(qc, [m], ref, [0])


def properties(program: Circuit):
    return [QPEExactPhase(program), QPEZeroPhase(program), QPEEigenstatePreserved(program)]


FIXTURE = AlgorithmFixture(
    name="qpe",
    program=build_qft(DEFAULT_COUNTING).inverse(),
    make_properties=properties,
    builder=build_qpe,
    mutant_seed=303,
)
