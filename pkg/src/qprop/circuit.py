"""Immutable circuit representation.

A :class:`Circuit` is a qubit count plus an ordered tuple of elements, each a
:class:`Gate`, an :class:`Initialize` (load a statevector onto some qubits) or
a terminal :class:`Measure`. Every builder returns a new circuit.

Qubit ``q`` is bit ``q`` of a basis-state index (qubit 0 is the least
significant bit). A k-qubit gate matrix is indexed the same way over the
gate's own qubit list, so for ``CX(0, 1)`` qubit 0 is the control.
"""
from __future__ import annotations

import cmath
import enum
import hashlib
import math
import struct
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np


class CircuitError(ValueError):
    """Raised when a circuit or one of its elements would be invalid."""


class Basis(enum.Enum):
    X = "X"
    Y = "Y"
    Z = "Z"


ALL_BASES = (Basis.Z, Basis.X, Basis.Y)


class GateKind(enum.Enum):
    H = "h"
    X = "x"
    Y = "y"
    Z = "z"
    S = "s"
    SDG = "sdg"
    T = "t"
    TDG = "tdg"
    RX = "rx"
    RY = "ry"
    RZ = "rz"
    P = "p"
    U = "u"
    CX = "cx"
    CZ = "cz"
    SWAP = "swap"
    CCX = "ccx"
    CP = "cp"

    @property
    def num_qubits(self) -> int:
        if self in _TWO_QUBIT:
            return 2
        if self is GateKind.CCX:
            return 3
        return 1

    @property
    def num_params(self) -> int:
        if self is GateKind.U:
            return 3
        if self in (GateKind.RX, GateKind.RY, GateKind.RZ, GateKind.P, GateKind.CP):
            return 1
        return 0


_TWO_QUBIT = frozenset({GateKind.CX, GateKind.CZ, GateKind.SWAP, GateKind.CP})


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        object.__setattr__(self, "params", tuple(float(p) + 0.0 for p in self.params))
        if len(self.qubits) != self.kind.num_qubits:
            raise CircuitError(
                f"{self.kind.name} acts on {self.kind.num_qubits} qubit(s), got {len(self.qubits)}"
            )
        if len(self.params) != self.kind.num_params:
            raise CircuitError(
                f"{self.kind.name} takes {self.kind.num_params} parameter(s), got {len(self.params)}"
            )
        if len(set(self.qubits)) != len(self.qubits):
            raise CircuitError(f"duplicate qubit indices in {self.kind.name}{self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise CircuitError(f"negative qubit index in {self.kind.name}{self.qubits}")
        if not all(math.isfinite(p) for p in self.params):
            raise CircuitError(f"non-finite parameter in {self.kind.name}{self.params}")

    def inverse(self) -> Gate:
        k, p = self.kind, self.params
        if k in _SELF_INVERSE:
            return self
        if k in _DAGGER:
            return Gate(_DAGGER[k], self.qubits)
        if k is GateKind.U:
            theta, phi, lam = p
            return Gate(k, self.qubits, (-theta, -lam, -phi))
        return Gate(k, self.qubits, (-p[0],))

    def matrix(self) -> np.ndarray:
        return gate_matrix(self.kind, self.params)


_SELF_INVERSE = frozenset(
    {GateKind.H, GateKind.X, GateKind.Y, GateKind.Z, GateKind.CX, GateKind.CZ, GateKind.SWAP, GateKind.CCX}
)
_DAGGER = {GateKind.S: GateKind.SDG, GateKind.SDG: GateKind.S, GateKind.T: GateKind.TDG, GateKind.TDG: GateKind.T}


@dataclass(frozen=True, eq=False)
class Initialize:
    """Load ``state`` onto ``targets`` (sorted; target i is bit i of the state index)."""

    state: np.ndarray
    targets: tuple[int, ...]

    def __post_init__(self):
        targets = tuple(int(q) for q in self.targets)
        state = np.array(self.state, dtype=np.complex128).reshape(-1)
        state.setflags(write=False)
        object.__setattr__(self, "targets", targets)
        object.__setattr__(self, "state", state)
        if list(targets) != sorted(set(targets)) or not targets:
            raise CircuitError(f"initialize targets must be sorted and distinct, got {targets}")
        if state.shape[0] != 2 ** len(targets):
            raise CircuitError(
                f"statevector of length {state.shape[0]} cannot initialize {len(targets)} qubit(s)"
            )
        norm = float(np.vdot(state, state).real)
        if abs(norm - 1.0) > 1e-10:
            raise CircuitError(f"initialize requires a unit-norm vector, got squared norm {norm:.6g}")

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.targets


@dataclass(frozen=True)
class Measure:
    """Terminal measurement of one qubit into a classical bit.

    ``basis`` records the intent only; the rotation into that basis is a
    gate sequence placed before the measurement (see :func:`measure`).
    """

    qubit: int
    basis: Basis = Basis.Z
    clbit: int = 0

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.qubit,)


Element = Gate | Initialize | Measure


@dataclass(frozen=True, eq=False)
class Circuit:
    num_qubits: int
    ops: tuple = ()
    global_phase: float = 0.0

    def __post_init__(self):
        if not isinstance(self.num_qubits, (int, np.integer)) or self.num_qubits < 1:
            raise CircuitError(f"a circuit needs at least one qubit, got {self.num_qubits!r}")
        object.__setattr__(self, "num_qubits", int(self.num_qubits))
        object.__setattr__(self, "ops", tuple(self.ops))
        object.__setattr__(self, "global_phase", float(self.global_phase) + 0.0)  # drop signed zero

    # -- value semantics ---------------------------------------------------
    @cached_property
    def digest(self) -> str:
        return canonical_hash(self)

    def __eq__(self, other):
        if not isinstance(other, Circuit):
            return NotImplemented
        return self.digest == other.digest

    def __hash__(self):
        return hash(self.digest)

    def __len__(self):
        return len(self.ops)

    def __repr__(self):
        return f"Circuit(num_qubits={self.num_qubits}, ops={len(self.ops)}, digest={self.digest[:10]})"

    # -- queries -----------------------------------------------------------
    @property
    def gates(self) -> list[Gate]:
        return [op for op in self.ops if isinstance(op, Gate)]

    @property
    def measurements(self) -> list[Measure]:
        return [op for op in self.ops if isinstance(op, Measure)]

    @property
    def measured_qubits(self) -> frozenset[int]:
        return frozenset(m.qubit for m in self.measurements)

    def has_measurements(self) -> bool:
        return any(isinstance(op, Measure) for op in self.ops)

    def has_initialize(self) -> bool:
        return any(isinstance(op, Initialize) for op in self.ops)

    def touched_qubits(self) -> frozenset[int]:
        return frozenset(q for op in self.ops for q in op.qubits)

    # -- builders ----------------------------------------------------------
    def append(self, element: Element) -> Circuit:
        if isinstance(element, Gate):
            return append_gate(self, element)
        if isinstance(element, Initialize):
            return initialize(self, element.state, element.targets)
        if isinstance(element, Measure):
            return _append_measure(self, element)
        raise TypeError(f"cannot append {type(element).__name__}")

    def gate(self, kind: GateKind, qubits: Sequence[int], params: Sequence[float] = ()) -> Circuit:
        return append_gate(self, Gate(kind, tuple(qubits), tuple(params)))

    def h(self, q): return self.gate(GateKind.H, (q,))
    def x(self, q): return self.gate(GateKind.X, (q,))
    def y(self, q): return self.gate(GateKind.Y, (q,))
    def z(self, q): return self.gate(GateKind.Z, (q,))
    def s(self, q): return self.gate(GateKind.S, (q,))
    def sdg(self, q): return self.gate(GateKind.SDG, (q,))
    def t(self, q): return self.gate(GateKind.T, (q,))
    def tdg(self, q): return self.gate(GateKind.TDG, (q,))
    def rx(self, theta, q): return self.gate(GateKind.RX, (q,), (theta,))
    def ry(self, theta, q): return self.gate(GateKind.RY, (q,), (theta,))
    def rz(self, theta, q): return self.gate(GateKind.RZ, (q,), (theta,))
    def p(self, lam, q): return self.gate(GateKind.P, (q,), (lam,))
    def u(self, theta, phi, lam, q): return self.gate(GateKind.U, (q,), (theta, phi, lam))
    def cx(self, c, t): return self.gate(GateKind.CX, (c, t))
    def cz(self, a, b): return self.gate(GateKind.CZ, (a, b))
    def swap(self, a, b): return self.gate(GateKind.SWAP, (a, b))
    def ccx(self, c0, c1, t): return self.gate(GateKind.CCX, (c0, c1, t))
    def cp(self, lam, c, t): return self.gate(GateKind.CP, (c, t), (lam,))

    def initialize(self, state, targets: Sequence[int]) -> Circuit:
        return initialize(self, state, targets)

    def compose(self, other: Circuit, qubit_map: Sequence[int] | None = None) -> Circuit:
        return compose(self, other, qubit_map)

    def measure(self, qubit: int, basis: Basis = Basis.Z, clbit: int | None = None) -> Circuit:
        return measure(self, qubit, basis, clbit)

    def inverse(self) -> Circuit:
        if any(not isinstance(op, Gate) for op in self.ops):
            raise CircuitError("only gate-only circuits can be inverted")
        return Circuit(self.num_qubits, tuple(g.inverse() for g in reversed(self.ops)), -self.global_phase)

    def with_phase(self, phase: float) -> Circuit:
        return Circuit(self.num_qubits, self.ops, self.global_phase + phase)


# -- module-level operations -------------------------------------------------

def new_circuit(num_qubits: int) -> Circuit:
    return Circuit(num_qubits)


def _check_range(c: Circuit, qubits: Iterable[int]):
    for q in qubits:
        if not 0 <= q < c.num_qubits:
            raise CircuitError(f"qubit {q} out of range for a {c.num_qubits}-qubit circuit")


def append_gate(c: Circuit, g: Gate) -> Circuit:
    _check_range(c, g.qubits)
    measured = c.measured_qubits
    if measured.intersection(g.qubits):
        raise CircuitError(f"{g.kind.name} on {g.qubits} comes after a measurement")
    return Circuit(c.num_qubits, c.ops + (g,), c.global_phase)


def initialize(c: Circuit, sv, targets: Sequence[int]) -> Circuit:
    el = Initialize(getattr(sv, "amplitudes", sv), tuple(targets))
    _check_range(c, el.targets)
    used = c.touched_qubits().intersection(el.targets)
    if used:
        raise CircuitError(f"qubits {sorted(used)} were already used before initialize")
    return Circuit(c.num_qubits, c.ops + (el,), c.global_phase)


def _append_measure(c: Circuit, m: Measure) -> Circuit:
    _check_range(c, (m.qubit,))
    if m.qubit in c.measured_qubits:
        raise CircuitError(f"qubit {m.qubit} is already measured")
    return Circuit(c.num_qubits, c.ops + (m,), c.global_phase)


def insert_basis_change(c: Circuit, qubit: int, basis: Basis) -> Circuit:
    """Rotate ``qubit`` so a Z measurement reads it out in ``basis``.

    X uses H; Y uses Sdg then H (maps the +i eigenstate to |0>).
    """
    _check_range(c, (qubit,))
    if qubit in c.measured_qubits:
        raise CircuitError(f"qubit {qubit} is already measured")
    if basis is Basis.Z:
        return c
    if basis is Basis.X:
        return c.h(qubit)
    return c.sdg(qubit).h(qubit)


def measure(c: Circuit, qubit: int, basis: Basis = Basis.Z, clbit: int | None = None) -> Circuit:
    if clbit is None:
        clbit = len(c.measurements)
    c = insert_basis_change(c, qubit, basis)
    return _append_measure(c, Measure(qubit, basis, clbit))


def compose(a: Circuit, b: Circuit, qubit_map: Sequence[int] | None = None) -> Circuit:
    """Append ``b``'s elements to ``a``; qubit ``i`` of ``b`` lands on ``qubit_map[i]``."""
    if qubit_map is None:
        qubit_map = list(range(b.num_qubits))
    qubit_map = [int(q) for q in qubit_map]
    if len(qubit_map) != b.num_qubits:
        raise CircuitError(f"qubit map has {len(qubit_map)} entries for a {b.num_qubits}-qubit circuit")
    if len(set(qubit_map)) != len(qubit_map):
        raise CircuitError(f"qubit map {qubit_map} is not injective")
    _check_range(a, qubit_map)
    out = a
    for op in b.ops:
        if isinstance(op, Gate):
            out = append_gate(out, Gate(op.kind, tuple(qubit_map[q] for q in op.qubits), op.params))
        elif isinstance(op, Initialize):
            mapped = [qubit_map[q] for q in op.targets]
            order = np.argsort(mapped)
            state = op.state.reshape([2] * len(mapped))
            # tensor axis j holds bit (k-1-j); reorder so targets come out sorted
            k = len(mapped)
            axes = [k - 1 - int(order[k - 1 - j]) for j in range(k)]
            state = np.transpose(state, axes).reshape(-1)
            out = initialize(out, state, sorted(mapped))
        else:
            out = _append_measure(out, Measure(qubit_map[op.qubit], op.basis, op.clbit))
    return Circuit(out.num_qubits, out.ops, a.global_phase + b.global_phase)


def canonical_hash(c: Circuit) -> str:
    """Structural digest: exact float bit patterns, element order, indices."""
    h = hashlib.blake2b(digest_size=16)
    h.update(struct.pack("<Id", c.num_qubits, c.global_phase))
    for op in c.ops:
        if isinstance(op, Gate):
            h.update(b"G" + op.kind.value.encode() + b":")
            h.update(struct.pack(f"<{len(op.qubits)}i", *op.qubits))
            h.update(struct.pack(f"<{len(op.params)}d", *op.params))
        elif isinstance(op, Initialize):
            h.update(b"I" + struct.pack(f"<{len(op.targets)}i", *op.targets))
            h.update(op.state.tobytes())
        else:
            h.update(b"M" + struct.pack("<ii", op.qubit, op.clbit) + op.basis.value.encode())
        h.update(b";")
    return h.hexdigest()


# -- gate matrices -------------------------------------------------------------

_S2 = 1 / math.sqrt(2)
_FIXED = {
    GateKind.H: np.array([[_S2, _S2], [_S2, -_S2]], dtype=complex),
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
    GateKind.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    GateKind.Z: np.array([[1, 0], [0, -1]], dtype=complex),
    GateKind.S: np.array([[1, 0], [0, 1j]], dtype=complex),
    GateKind.SDG: np.array([[1, 0], [0, -1j]], dtype=complex),
    GateKind.T: np.array([[1, 0], [0, cmath.exp(1j * math.pi / 4)]], dtype=complex),
    GateKind.TDG: np.array([[1, 0], [0, cmath.exp(-1j * math.pi / 4)]], dtype=complex),
    # little-endian over (control, target)
    GateKind.CX: np.array([[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]], dtype=complex),
    GateKind.CZ: np.diag([1, 1, 1, -1]).astype(complex),
    GateKind.SWAP: np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex),
}
_ccx = np.eye(8, dtype=complex)
_ccx[[3, 7]] = _ccx[[7, 3]]
_FIXED[GateKind.CCX] = _ccx
for _m in _FIXED.values():
    _m.setflags(write=False)


def u_matrix(theta: float, phi: float, lam: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array(
        [[c, -cmath.exp(1j * lam) * s], [cmath.exp(1j * phi) * s, cmath.exp(1j * (phi + lam)) * c]],
        dtype=complex,
    )


def gate_matrix(kind: GateKind, params: Sequence[float] = ()) -> np.ndarray:
    if kind in _FIXED:
        return _FIXED[kind]
    if kind is GateKind.U:
        return u_matrix(*params)
    (a,) = params
    c, s = math.cos(a / 2), math.sin(a / 2)
    if kind is GateKind.RX:
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    if kind is GateKind.RY:
        return np.array([[c, -s], [s, c]], dtype=complex)
    if kind is GateKind.RZ:
        return np.array([[cmath.exp(-0.5j * a), 0], [0, cmath.exp(0.5j * a)]], dtype=complex)
    if kind is GateKind.P:
        return np.array([[1, 0], [0, cmath.exp(1j * a)]], dtype=complex)
    if kind is GateKind.CP:
        return np.diag([1, 1, 1, cmath.exp(1j * a)]).astype(complex)
    raise CircuitError(f"no matrix for {kind}")
