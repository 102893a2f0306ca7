"""Quantum Fourier transform (qubit 0 is the least significant bit)."""
from __future__ import annotations

import math

from ..circuit import Circuit
from ..generators import RandomInt, RandomState
from .base import AlgorithmFixture, ProgramProperty

DEFAULT_QUBITS = 3


def build_qft(n: int) -> Circuit:
    """Maps |x> to sum_y exp(2 pi i x y / 2^n) |y> / sqrt(2^n)."""
    if not 1 <= n <= 10:
        raise ValueError(f"build_qft supports 1..10 qubits, got {n}")
    c = Circuit(n)
    for j in reversed(range(n)):
        c = c.h(j)
        for k in reversed(range(j)):
            c = c.cp(math.pi / 2 ** (j - k), k, j)
    for i in range(n // 2):
        c = c.swap(i, n - 1 - i)
    return c


def basis_state(n: int, k: int) -> Circuit:
    c = Circuit(n)
    for q in range(n):
        if (k >> q) & 1:
            c = c.x(q)
    return c


def phase_gradient_state(n: int, k: int) -> Circuit:
    """Product state equal to QFT|k>, built one qubit at a time."""
    c = Circuit(n)
    for j in range(n):
        c = c.h(j).p(2 * math.pi * k * 2 ** j / 2 ** n, j)
    return c


class QFTRoundTrip(ProgramProperty):
    def input_generators(self):
        return [RandomState(self.program.num_qubits)]

    def operations(self, checks, psi):
        n = self.program.num_qubits
        qubits = list(range(n))
        prepared = Circuit(n).initialize(psi, qubits)
        qc = prepared.compose(self.program).compose(build_qft(n).inverse())
        checks.assert_equal(qc, qubits, prepared, qubits)


class QFTBasisStateUniformMarginals(ProgramProperty):
    def input_generators(self):
        return [RandomInt(0, 2 ** self.program.num_qubits - 1)]

    def operations(self, checks, k):
        n = self.program.num_qubits
        qc = basis_state(n, k).compose(self.program)
        checks.assert_probability(qc, list(range(n)), [0.5] * n)


class QFTPhaseGradient(ProgramProperty):
    def input_generators(self):
        return [RandomInt(0, 2 ** self.program.num_qubits - 1)]

    def operations(self, checks, k):
        n = self.program.num_qubits
        qubits = list(range(n))
        qc = basis_state(n, k).compose(self.program)
        checks.assert_equal(qc, qubits, phase_gradient_state(n, k), qubits)


def properties(program: Circuit):
    return [QFTRoundTrip(program), QFTBasisStateUniformMarginals(program), QFTPhaseGradient(program)]


FIXTURE = AlgorithmFixture(
    name="qft",
    program=build_qft(DEFAULT_QUBITS),
    make_properties=properties,
    builder=build_qft,
    mutant_seed=202,
)
