"""Shared fixture type for the reference algorithms."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from ..circuit import Circuit
from ..engine import Property


@dataclass(frozen=True)
class AlgorithmFixture:
    """A subject program plus the three properties that test it.

    ``program`` is the fixed, input-independent part of the algorithm and
    is what mutation operates on; ``make_properties(program)`` binds the
    properties to a (possibly mutated) program.
    """

    name: str
    program: Circuit
    make_properties: Callable[[Circuit], list[Property]]
    builder: Callable[..., Circuit]
    mutant_seed: int = 0
    notes: str = ""
    examples: dict = field(default_factory=dict)

    def properties(self, program: Circuit | None = None) -> list[Property]:
        return self.make_properties(self.program if program is None else program)


class ProgramProperty(Property):
    """A property bound to the circuit under test."""

    def __init__(self, program: Circuit):
        self.program = program

    def __repr__(self):
        return f"{type(self).__name__}({self.program!r})"
