"""Grover search with a phase oracle; the diffusion operator is the program."""
from __future__ import annotations

import math

import numpy as np

from ..circuit import Basis, Circuit
from ..generators import GroverOracle, RandomInt, marks_less_than_half, phase_oracle
from .base import AlgorithmFixture, ProgramProperty

DEFAULT_QUBITS = 3


def build_diffusion(n: int) -> Circuit:
    c = Circuit(n)
    for q in range(n):
        c = c.h(q).x(q)
    c = c.compose(phase_oracle(n, {2 ** n - 1}))
    for q in range(n):
        c = c.x(q).h(q)
    return c


def build_grover(n: int, oracle: Circuit, iterations: int, program: Circuit | None = None) -> Circuit:
    if iterations < 1:
        raise ValueError("build_grover needs at least one iteration")
    oracle = getattr(oracle, "circuit", oracle)
    if oracle.num_qubits != n:
        raise ValueError(f"oracle acts on {oracle.num_qubits} qubits, expected {n}")
    program = build_diffusion(n) if program is None else program
    c = Circuit(n)
    for q in range(n):
        c = c.h(q)
    for _ in range(iterations):
        c = c.compose(oracle).compose(program)
    return c


def optimal_iterations(n: int, marked: int) -> int:
    return max(1, round(math.pi / 4 * math.sqrt(2 ** n / marked)))


def amplified_probabilities(n: int, marked, iterations: int) -> np.ndarray:
    """Exact outcome distribution after ``iterations`` rounds of ideal Grover."""
    dim = 2 ** n
    k = len(marked)
    theta = math.asin(math.sqrt(k / dim))
    angle = (2 * iterations + 1) * theta
    probs = np.full(dim, math.cos(angle) ** 2 / (dim - k) if k < dim else 0.0)
    for m in marked:
        probs[m] = math.sin(angle) ** 2 / k
    return probs


def amplified_state(n: int, marked, iterations: int) -> np.ndarray:
    dim = 2 ** n
    k = len(marked)
    theta = math.asin(math.sqrt(k / dim))
    angle = (2 * iterations + 1) * theta
    amps = np.full(dim, math.cos(angle) / math.sqrt(dim - k), dtype=complex)
    for m in marked:
        amps[m] = math.sin(angle) / math.sqrt(k)
    return amps / np.linalg.norm(amps)


class GroverAmplifiesMarked(ProgramProperty):
    def input_generators(self):
        n = self.program.num_qubits
        return [GroverOracle(n, 1 / 2 ** n, 0.5)]

    def precondition(self, oracle):
        return marks_less_than_half(oracle)

    def operations(self, checks, oracle):
        n = self.program.num_qubits
        its = optimal_iterations(n, len(oracle.marked))
        qc = build_grover(n, oracle, its, self.program)
        ref = Circuit(n).initialize(amplified_state(n, oracle.marked, its), list(range(n)))
        checks.assert_equal(qc, list(range(n)), ref, list(range(n)))


class GroverIdentityOracleNoOp(ProgramProperty):
    def input_generators(self):
        return [GroverOracle(self.program.num_qubits, 0.0, 0.0), RandomInt(1, 3)]

    def operations(self, checks, oracle, iterations):
        n = self.program.num_qubits
        qc = build_grover(n, oracle, iterations, self.program)
        checks.assert_probability(qc, list(range(n)), [1.0] * n, basis=Basis.X)


class GroverMarkedMarginals(ProgramProperty):
    def input_generators(self):
        n = self.program.num_qubits
        return [GroverOracle(n, 1 / 2 ** n, 1.0)]

    def precondition(self, oracle):
        return marks_less_than_half(oracle)

    def operations(self, checks, oracle):
        n = self.program.num_qubits
        its = optimal_iterations(n, len(oracle.marked))
        qc = build_grover(n, oracle, its, self.program)
        probs = amplified_probabilities(n, oracle.marked, its)
        idx = np.arange(2 ** n)
        zero = [float(probs[((idx >> q) & 1) == 0].sum()) for q in range(n)]
        checks.assert_probability(qc, list(range(n)), zero)
        if len(oracle.marked) == 1:
            (m,) = oracle.marked
            checks.assert_most_frequent(qc, list(range(n)), "".join(str((m >> q) & 1) for q in range(n)))


def properties(program: Circuit):
    return [GroverAmplifiesMarked(program), GroverIdentityOracleNoOp(program), GroverMarkedMarginals(program)]


FIXTURE = AlgorithmFixture(
    name="grover",
    program=build_diffusion(DEFAULT_QUBITS),
    make_properties=properties,
    builder=build_grover,
    mutant_seed=404,
)
