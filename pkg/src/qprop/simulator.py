"""Dense statevector simulation and seeded shot sampling."""
from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .circuit import Circuit, CircuitError, Gate, Initialize, Measure
from .rng import make_rng

MAX_QUBITS = 20


class SimulationError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class StateVector:
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        n = amps.shape[0].bit_length() - 1
        if amps.shape[0] < 2 or 1 << n != amps.shape[0]:
            raise ValueError(f"statevector length {amps.shape[0]} is not a power of two >= 2")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > 1e-9:
            raise ValueError(f"statevector is not normalized (squared norm {norm:.12g})")
        amps = amps.copy()
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def num_qubits(self) -> int:
        return self.amplitudes.shape[0].bit_length() - 1

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.amplitudes, dtype=dtype)

    def __len__(self):
        return self.amplitudes.shape[0]


@dataclass(frozen=True)
class Counts:
    """Outcome counts keyed by bitstrings over the measured qubits.

    Character ``i`` of a key is the outcome of ``qubits[i]`` (ascending).
    """

    counts: Mapping[str, int]
    qubits: tuple[int, ...]
    total_shots: int

    def __getitem__(self, key: str) -> int:
        return self.counts.get(key, 0)

    def items(self):
        return self.counts.items()

    def marginal(self, qubits: Sequence[int]) -> Counts:
        """Counts restricted to ``qubits`` (in the given order), summing out the rest."""
        pos = [self.qubits.index(q) for q in qubits]
        out: dict[str, int] = {}
        for key, n in self.counts.items():
            sub = "".join(key[p] for p in pos)
            out[sub] = out.get(sub, 0) + n
        return Counts(dict(sorted(out.items())), tuple(qubits), self.total_shots)

    def most_frequent(self) -> list[str]:
        top = max(self.counts.values())
        return sorted(k for k, v in self.counts.items() if v == top)


# -- kernels -----------------------------------------------------------------

def apply_matrix(psi: np.ndarray, matrix: np.ndarray, qubits: Sequence[int], n: int) -> np.ndarray:
    """Apply a little-endian ``2^k x 2^k`` matrix to ``qubits`` of a length-2^n state."""
    k = len(qubits)
    tensor = psi.reshape((2,) * n)
    axes = [n - 1 - q for q in reversed(qubits)]
    mt = matrix.reshape((2,) * (2 * k))
    out = np.tensordot(mt, tensor, axes=(list(range(k, 2 * k)), axes))
    return np.moveaxis(out, list(range(k)), axes).reshape(-1)


def _apply_diagonal_phase(psi: np.ndarray, qubits: Sequence[int], n: int, phase: complex) -> np.ndarray:
    tensor = psi.reshape((2,) * n).copy()
    idx = [slice(None)] * n
    for q in qubits:
        idx[n - 1 - q] = 1
    tensor[tuple(idx)] *= phase
    return tensor.reshape(-1)


def _load(psi: np.ndarray, op: Initialize, n: int) -> np.ndarray:
    # targets are untouched (still |0>), so the state factorizes
    k = len(op.targets)
    rest = [q for q in range(n) if q not in op.targets]
    tensor = psi.reshape((2,) * n)
    idx = [slice(None)] * n
    for q in op.targets:
        idx[n - 1 - q] = 0
    env = tensor[tuple(idx)]  # axes ordered by descending rest-qubit
    sub = op.state.reshape((2,) * k)  # axes ordered by descending target
    full = np.multiply.outer(sub, env)
    # current axis order: targets descending, then rest descending
    current = [*reversed(op.targets), *reversed(rest)]
    want = list(range(n - 1, -1, -1))
    perm = [current.index(q) for q in want]
    return np.transpose(full, perm).reshape(-1)


def apply_element(psi: np.ndarray, op, n: int) -> np.ndarray:
    if isinstance(op, Gate):
        kind = op.kind.name
        if kind in ("CZ", "CP", "Z", "S", "SDG", "T", "TDG", "P"):
            phase = op.matrix()[-1, -1]
            return _apply_diagonal_phase(psi, op.qubits, n, phase)
        return apply_matrix(psi, op.matrix(), op.qubits, n)
    if isinstance(op, Initialize):
        return _load(psi, op, n)
    raise SimulationError("measurements cannot be applied to a statevector; use sample_counts")


def _evolve(c: Circuit, elements) -> np.ndarray:
    n = c.num_qubits
    if n > MAX_QUBITS:
        raise SimulationError(f"{n} qubits exceeds the simulator cap of {MAX_QUBITS}")
    psi = np.zeros(1 << n, dtype=np.complex128)
    psi[0] = 1.0
    for op in elements:
        psi = apply_element(psi, op, n)
    if c.global_phase:
        psi = psi * np.exp(1j * c.global_phase)
    return psi


class _StateCache:
    """Bounded LRU of gate-prefix statevectors keyed by circuit digest."""

    def __init__(self, size: int = 4096):
        self.size = size
        self._data: OrderedDict[str, np.ndarray] = OrderedDict()
        self.hits = 0
        self.misses = 0

    def get(self, c: Circuit) -> np.ndarray:
        key = c.digest
        psi = self._data.get(key)
        if psi is not None:
            self._data.move_to_end(key)
            self.hits += 1
            return psi
        self.misses += 1
        psi = _evolve(c, c.ops)
        psi.setflags(write=False)
        self._data[key] = psi
        if len(self._data) > self.size:
            self._data.popitem(last=False)
        return psi

    def clear(self):
        self._data.clear()
        self.hits = self.misses = 0


state_cache = _StateCache()


def statevector(c: Circuit) -> StateVector:
    if c.has_measurements():
        raise SimulationError("circuit contains measurements; use sample_counts to execute it")
    return StateVector(state_cache.get(c))


def marginal_distribution(sv, qubits: Sequence[int]) -> np.ndarray:
    """Probabilities over ``qubits``; entry index bit i is the outcome of ``qubits[i]``."""
    amps = np.asarray(getattr(sv, "amplitudes", sv))
    n = amps.shape[0].bit_length() - 1
    qubits = [int(q) for q in qubits]
    if len(set(qubits)) != len(qubits):
        raise ValueError(f"duplicate qubit indices {qubits}")
    if any(not 0 <= q < n for q in qubits):
        raise ValueError(f"qubit index out of range in {qubits}")
    probs = (np.abs(amps) ** 2).reshape((2,) * n)
    rest = tuple(n - 1 - q for q in range(n) if q not in qubits)
    marg = probs.sum(axis=rest) if rest else probs
    # remaining axes are in descending qubit order; reorder to descending list position
    remaining = sorted(qubits, reverse=True)
    perm = [remaining.index(q) for q in reversed(qubits)]
    return np.transpose(marg, perm).reshape(-1)


def _bitstrings(k: int) -> list[str]:
    return ["".join("1" if (i >> j) & 1 else "0" for j in range(k)) for i in range(1 << k)]


def sample_distribution(probs: np.ndarray, qubits: Sequence[int], shots: int, seed: int) -> Counts:
    """Multinomial draw of ``shots`` outcomes from an exact marginal."""
    p = np.clip(np.asarray(probs, dtype=float), 0.0, None)
    p = p / p.sum()
    draws = make_rng(seed, "shots").multinomial(shots, p)
    keys = _bitstrings(len(qubits))
    counts = {keys[i]: int(v) for i, v in enumerate(draws) if v}
    return Counts(dict(sorted(counts.items())), tuple(qubits), int(shots))


def sample_counts(c: Circuit, shots: int, seed: int) -> Counts:
    """Execute ``c`` (basis changes already inlined) and sample its terminal measurements."""
    measures = c.measurements
    if not measures:
        raise SimulationError("circuit has no measurements to sample")
    if shots < 1:
        raise ValueError(f"shots must be positive, got {shots}")
    unitary_part = Circuit(c.num_qubits, tuple(op for op in c.ops if not isinstance(op, Measure)), c.global_phase)
    psi = state_cache.get(unitary_part)
    qubits = sorted(m.qubit for m in measures)
    return sample_distribution(marginal_distribution(psi, qubits), qubits, shots, seed)


def circuit_unitary(c: Circuit) -> np.ndarray:
    """Full matrix of a gate-only circuit (columns are images of basis states)."""
    if any(not isinstance(op, Gate) for op in c.ops):
        raise SimulationError("unitary requires a gate-only circuit")
    n = c.num_qubits
    dim = 1 << n
    cols = np.eye(dim, dtype=np.complex128)
    out = np.empty((dim, dim), dtype=np.complex128)
    for j in range(dim):
        psi = cols[j]
        for op in c.ops:
            psi = apply_element(psi, op, n)
        out[:, j] = psi
    return out * np.exp(1j * c.global_phase)


def equal_up_to_global_phase(a, b, atol: float = 1e-9) -> bool:
    a = np.asarray(a).reshape(-1)
    b = np.asarray(b).reshape(-1)
    overlap = np.vdot(a, b)
    if abs(overlap) < 1e-12:
        return False
    phase = overlap / abs(overlap)
    return bool(np.allclose(a * phase, b, atol=atol))
