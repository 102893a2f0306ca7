"""Deutsch-Jozsa with the ancilla as the last qubit.

The program is the Hadamard layer on the input register; it is applied on
both sides of the oracle.
"""
from __future__ import annotations

from ..circuit import Basis, Circuit
from ..generators import DeutschJozsaOracle, RandomInt
from .base import AlgorithmFixture, ProgramProperty

DEFAULT_INPUTS = 3


def build_hadamard_layer(n: int) -> Circuit:
    c = Circuit(n + 1)
    for q in range(n):
        c = c.h(q)
    return c


def build_dj(n: int, oracle: Circuit, program: Circuit | None = None) -> Circuit:
    if oracle.num_qubits != n + 1:
        raise ValueError(f"oracle acts on {oracle.num_qubits} qubits, expected {n + 1}")
    program = build_hadamard_layer(n) if program is None else program
    if program.num_qubits != n + 1:
        raise ValueError(f"program acts on {program.num_qubits} qubits, expected {n + 1}")
    return Circuit(n + 1).x(n).h(n).compose(program).compose(oracle).compose(program)


class DJConstantGivesZeros(ProgramProperty):
    def input_generators(self):
        return [DeutschJozsaOracle(self.program.num_qubits - 1, "constant")]

    def operations(self, checks, oracle):
        n = self.program.num_qubits - 1
        checks.assert_most_frequent(build_dj(n, oracle, self.program), list(range(n)), "0" * n)


class DJBalancedNotZeros(ProgramProperty):
    def input_generators(self):
        return [DeutschJozsaOracle(self.program.num_qubits - 1, "balanced")]

    def operations(self, checks, oracle):
        n = self.program.num_qubits - 1
        qc = build_dj(n, oracle, self.program)
        checks.assert_different(qc, list(range(n)), Circuit(n), list(range(n)))


class DJAncillaUnchanged(ProgramProperty):
    def input_generators(self):
        n = self.program.num_qubits - 1
        return [RandomInt(0, 1), DeutschJozsaOracle(n, "constant"), DeutschJozsaOracle(n, "balanced")]

    def operations(self, checks, pick, constant, balanced):
        n = self.program.num_qubits - 1
        qc = build_dj(n, balanced if pick else constant, self.program)
        checks.assert_probability(qc, [n], [0.0], basis=Basis.X)


def properties(program: Circuit):
    return [DJConstantGivesZeros(program), DJBalancedNotZeros(program), DJAncillaUnchanged(program)]


FIXTURE = AlgorithmFixture(
    name="deutsch_jozsa",
    program=build_hadamard_layer(DEFAULT_INPUTS),
    make_properties=properties,
    builder=build_dj,
    mutant_seed=505,
)
