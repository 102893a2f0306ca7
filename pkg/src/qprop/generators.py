"""Seeded input generators for properties.

Each generator is a small frozen dataclass. ``generate(seed)`` is a pure
function of the seed, and ``signature`` (kind plus parameters) is what the
runner uses to decide whether two properties draw from the same seed stream.
"""
from __future__ import annotations

import math
from dataclasses import astuple, dataclass, fields
from typing import Any, ClassVar, NamedTuple

import numpy as np

from .circuit import Circuit
from .rng import make_rng
from .simulator import MAX_QUBITS, StateVector
from .synthesis import synthesize


class GeneratorError(ValueError):
    pass


# -- plain functions -----------------------------------------------------------

def random_state(num_qubits: int, seed: int) -> StateVector:
    """Haar-random pure state: complex Gaussian vector, normalized."""
    if not 1 <= num_qubits <= MAX_QUBITS:
        raise GeneratorError(f"random_state supports 1..{MAX_QUBITS} qubits, got {num_qubits}")
    rng = make_rng(seed, "random_state")
    dim = 1 << num_qubits
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return StateVector(v / np.linalg.norm(v))


def haar_unitary(num_qubits: int, seed: int) -> np.ndarray:
    """Haar-random unitary from the QR factors of a complex Ginibre matrix."""
    rng = make_rng(seed, "random_unitary")
    dim = 1 << num_qubits
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_unitary(num_qubits: int, seed: int) -> Circuit:
    if not 1 <= num_qubits <= 4:
        raise GeneratorError(f"random_unitary supports 1..4 qubits, got {num_qubits}")
    return synthesize(haar_unitary(num_qubits, seed))


def random_int(low: int, high: int, seed: int) -> int:
    if low > high:
        raise GeneratorError(f"empty integer range [{low}, {high}]")
    return int(make_rng(seed, "random_int").integers(low, high + 1))


class GroverOracleInput(NamedTuple):
    circuit: Circuit
    marked: frozenset[int]
    num_qubits: int


def diagonal_phase_circuit(phases: np.ndarray) -> Circuit:
    """Circuit for ``diag(exp(i*phases))`` via its Walsh (parity) expansion."""
    phases = np.asarray(phases, dtype=float)
    dim = phases.shape[0]
    n = dim.bit_length() - 1
    x = np.arange(dim)
    c = Circuit(n, (), float(phases.mean()))
    for t in range(1, dim):
        signs = 1 - 2 * (np.array([bin(v).count("1") for v in (x & t)]) & 1)
        coeff = float(phases @ signs) / dim
        if abs(coeff) < 1e-15:
            continue
        bits = [q for q in range(n) if (t >> q) & 1]
        target = bits[-1]
        for q in bits[:-1]:
            c = c.cx(q, target)
        c = c.rz(-2 * coeff, target)
        for q in reversed(bits[:-1]):
            c = c.cx(q, target)
    return c


def phase_oracle(num_qubits: int, marked) -> Circuit:
    """Phase-flip oracle: -1 on every basis state in ``marked``."""
    phases = np.zeros(1 << num_qubits)
    bad = sorted(m for m in marked if not 0 <= m < phases.shape[0])
    if bad:
        raise GeneratorError(f"marked states {bad} out of range for {num_qubits} qubits")
    for m in marked:
        phases[m] = math.pi
    if not marked:
        return Circuit(num_qubits)
    return diagonal_phase_circuit(phases)


def grover_oracle(num_qubits: int, mark_range: tuple[float, float], seed: int) -> GroverOracleInput:
    lo_frac, hi_frac = mark_range
    if not 0 <= lo_frac <= hi_frac <= 1:
        raise GeneratorError(f"invalid mark range {mark_range}")
    if not 1 <= num_qubits <= 6:
        raise GeneratorError(f"grover_oracle supports 1..6 qubits, got {num_qubits}")
    dim = 1 << num_qubits
    lo, hi = math.ceil(lo_frac * dim - 1e-12), math.floor(hi_frac * dim + 1e-12)
    if lo > hi:
        raise GeneratorError(f"no subset size fits mark range {mark_range} for {num_qubits} qubits")
    rng = make_rng(seed, "grover_oracle")
    size = int(rng.integers(lo, hi + 1))
    marked = frozenset(int(v) for v in rng.choice(dim, size=size, replace=False))
    return GroverOracleInput(phase_oracle(num_qubits, marked), marked, num_qubits)


def marks_less_than_half(oracle: GroverOracleInput) -> bool:
    return len(oracle.marked) < (1 << oracle.num_qubits) / 2


def marks_more_than_half(oracle: GroverOracleInput) -> bool:
    return len(oracle.marked) > (1 << oracle.num_qubits) / 2


def ucnot_state_prep(num_qubits: int, seed: int) -> Circuit:
    """``num_qubits`` layers of random U gates on every qubit, each followed by one random CX."""
    if num_qubits < 1:
        raise GeneratorError("ucnot_state_prep needs at least one qubit")
    rng = make_rng(seed, "ucnot")
    c = Circuit(num_qubits)
    for _ in range(num_qubits):
        for q in range(num_qubits):
            theta, phi, lam = rng.uniform(0, 2 * math.pi, size=3)
            c = c.u(theta, phi, lam, q)
        if num_qubits > 1:
            a, b = rng.choice(num_qubits, size=2, replace=False)
            c = c.cx(int(a), int(b))
    return c


def constant_or_balanced_oracle(num_qubits: int, kind: str, seed: int) -> Circuit:
    """Bit-flip oracle on ``num_qubits`` inputs plus an ancilla (the last qubit).

    Balanced oracles are the linear functions ``f(x) = mask . x`` for a
    uniformly chosen non-zero mask.
    """
    if kind not in ("constant", "balanced"):
        raise GeneratorError(f"oracle kind must be 'constant' or 'balanced', got {kind!r}")
    rng = make_rng(seed, "dj_oracle", kind)
    anc = num_qubits
    c = Circuit(num_qubits + 1)
    if kind == "constant":
        if rng.integers(0, 2):
            c = c.x(anc)
        return c
    mask = int(rng.integers(1, 1 << num_qubits))
    for q in range(num_qubits):
        if (mask >> q) & 1:
            c = c.cx(q, anc)
    return c


# -- generator objects -----------------------------------------------------------

@dataclass(frozen=True)
class InputGenerator:
    kind: ClassVar[str] = "abstract"
    produces: ClassVar[type] = object

    @property
    def signature(self) -> tuple:
        return (self.kind, astuple(self))

    def generate(self, seed: int) -> Any:
        raise NotImplementedError

    def describe(self) -> str:
        args = ", ".join(f"{f.name}={getattr(self, f.name)!r}" for f in fields(self))
        return f"{type(self).__name__}({args})"


@dataclass(frozen=True)
class RandomState(InputGenerator):
    num_qubits: int
    kind: ClassVar[str] = "random_state"
    produces: ClassVar[type] = StateVector

    def generate(self, seed):
        return random_state(self.num_qubits, seed)


@dataclass(frozen=True)
class RandomUnitary(InputGenerator):
    num_qubits: int
    kind: ClassVar[str] = "random_unitary"
    produces: ClassVar[type] = Circuit

    def generate(self, seed):
        return random_unitary(self.num_qubits, seed)


@dataclass(frozen=True)
class RandomInt(InputGenerator):
    low: int
    high: int
    kind: ClassVar[str] = "random_int"
    produces: ClassVar[type] = int

    def generate(self, seed):
        return random_int(self.low, self.high, seed)


@dataclass(frozen=True)
class GroverOracle(InputGenerator):
    num_qubits: int
    min_frac: float = 0.0
    max_frac: float = 1.0
    kind: ClassVar[str] = "grover_oracle"
    produces: ClassVar[type] = GroverOracleInput

    def generate(self, seed):
        return grover_oracle(self.num_qubits, (self.min_frac, self.max_frac), seed)


@dataclass(frozen=True)
class UCNOTStatePrep(InputGenerator):
    num_qubits: int
    kind: ClassVar[str] = "ucnot_state_prep"
    produces: ClassVar[type] = Circuit

    def generate(self, seed):
        return ucnot_state_prep(self.num_qubits, seed)


@dataclass(frozen=True)
class DeutschJozsaOracle(InputGenerator):
    num_qubits: int
    oracle_kind: str
    kind: ClassVar[str] = "dj_oracle"
    produces: ClassVar[type] = Circuit

    def generate(self, seed):
        return constant_or_balanced_oracle(self.num_qubits, self.oracle_kind, seed)


GENERATORS = {
    cls.kind: cls
    for cls in (RandomState, RandomUnitary, RandomInt, GroverOracle, UCNOTStatePrep, DeutschJozsaOracle)
}
