"""Reference algorithms and their properties."""
from __future__ import annotations

from . import deutsch_jozsa, grover, qft, qpe, superdense, teleportation
from .base import AlgorithmFixture, ProgramProperty
from .deutsch_jozsa import build_dj
from .grover import build_grover
from .qft import build_qft
from .qpe import build_qpe
from .superdense import build_superdense
from .teleportation import TeleportationOutputEqualToInput, build_teleportation

FIXTURES: dict[str, AlgorithmFixture] = {
    f.name: f
    for f in (
        teleportation.FIXTURE,
        qft.FIXTURE,
        qpe.FIXTURE,
        grover.FIXTURE,
        deutsch_jozsa.FIXTURE,
        superdense.FIXTURE,
    )
}


def get_fixture(name: str) -> AlgorithmFixture:
    try:
        return FIXTURES[name]
    except KeyError:
        raise KeyError(f"unknown algorithm {name!r}; choose from {sorted(FIXTURES)}") from None


__all__ = [
    "AlgorithmFixture",
    "FIXTURES",
    "ProgramProperty",
    "TeleportationOutputEqualToInput",
    "build_dj",
    "build_grover",
    "build_qft",
    "build_qpe",
    "build_superdense",
    "build_teleportation",
    "get_fixture",
]
