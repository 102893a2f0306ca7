"""Superdense coding of two classical bits.

``bits`` is the decoded outcome string: character 0 is qubit 0 (set by a Z
on the sender's qubit), character 1 is qubit 1 (set by an X). The decoding
stage (CX then H) is the program under test.
"""
from __future__ import annotations

from ..circuit import Basis, Circuit
from ..generators import RandomInt
from .base import AlgorithmFixture, ProgramProperty


def build_decoder() -> Circuit:
    return Circuit(2).cx(0, 1).h(0)


def build_superdense(bits: str, program: Circuit | None = None) -> Circuit:
    if bits not in ("00", "01", "10", "11"):
        raise ValueError(f"bits must be a 2-character bitstring, got {bits!r}")
    c = Circuit(2).h(0).cx(0, 1)
    if bits[1] == "1":
        c = c.x(0)
    if bits[0] == "1":
        c = c.z(0)
    return c.compose(build_decoder() if program is None else program)


def _bits(k: int) -> str:
    return f"{k & 1}{(k >> 1) & 1}"


class SuperdenseDecodes(ProgramProperty):
    def input_generators(self):
        return [RandomInt(0, 3)]

    def operations(self, checks, k):
        bits = _bits(k)
        qc = build_superdense(bits, self.program)
        checks.assert_probability(qc, [0, 1], [1.0 - int(b) for b in bits])


class SuperdenseOutputsAreBasisStates(ProgramProperty):
    def input_generators(self):
        return [RandomInt(0, 3)]

    def operations(self, checks, k):
        qc = build_superdense(_bits(k), self.program)
        checks.assert_probability(qc, [0, 1], [0.5, 0.5], basis=Basis.X)
        checks.assert_probability(qc, [0, 1], [0.5, 0.5], basis=Basis.Y)


class SuperdenseMostFrequent(ProgramProperty):
    def input_generators(self):
        return [RandomInt(0, 3)]

    def operations(self, checks, k):
        bits = _bits(k)
        checks.assert_most_frequent(build_superdense(bits, self.program), [0, 1], bits)


def properties(program: Circuit):
    return [SuperdenseDecodes(program), SuperdenseOutputsAreBasisStates(program), SuperdenseMostFrequent(program)]


FIXTURE = AlgorithmFixture(
    name="superdense",
    program=build_decoder(),
    make_properties=properties,
    builder=build_superdense,
    mutant_seed=606,
)
