"""Quantum teleportation of qubit 0 onto qubit 2.

The classically controlled corrections are replaced by CX/CZ from the
measured qubits (deferred measurement), so the circuit is unitary and
leaves the sender's two qubits in |+>|+>.
"""
from __future__ import annotations

from ..circuit import Basis, Circuit
from ..generators import RandomState
from .base import AlgorithmFixture, ProgramProperty

# inputs too close to an even split have no reliable dominant outcome
DOMINANCE_MARGIN = 0.1


def build_teleportation() -> Circuit:
    return Circuit(3).h(1).cx(1, 2).cx(0, 1).h(0).cx(1, 2).cz(0, 2)


def _teleport(program: Circuit, state) -> Circuit:
    return Circuit(3).initialize(state, [0]).compose(program)


class TeleportationOutputEqualToInput(ProgramProperty):
    def input_generators(self):
        return [RandomState(1)]

    def operations(self, checks, q0):
        qc = _teleport(self.program, q0)
        qc2 = Circuit(1).initialize(q0, [0])
        checks.assert_equal(qc, [2], qc2, [0])


class TeleportationPreservesDominantOutcome(ProgramProperty):
    def input_generators(self):
        return [RandomState(1)]

    def precondition(self, q0):
        return abs(q0.probabilities()[0] - 0.5) >= DOMINANCE_MARGIN

    def operations(self, checks, q0):
        expected = "0" if q0.probabilities()[0] > 0.5 else "1"
        checks.assert_most_frequent(_teleport(self.program, q0), [2], expected)


class TeleportationResetsSender(ProgramProperty):
    def input_generators(self):
        return [RandomState(1)]

    def operations(self, checks, q0):
        checks.assert_probability(_teleport(self.program, q0), [0, 1], [1.0, 1.0], basis=Basis.X)


def properties(program: Circuit):
    return [
        TeleportationOutputEqualToInput(program),
        TeleportationPreservesDominantOutcome(program),
        TeleportationResetsSender(program),
    ]


FIXTURE = AlgorithmFixture(
    name="teleportation",
    program=build_teleportation(),
    make_properties=properties,
    builder=build_teleportation,
    mutant_seed=101,
)
