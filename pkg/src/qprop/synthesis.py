"""Exact synthesis of unitaries into the supported gate set.

``synthesize`` uses the quantum Shannon decomposition: a cosine-sine split
of the top qubit, demultiplexing of the block-diagonal factors, and
uniformly controlled RY/RZ rotations built from CX ladders. One-qubit blocks
become a single U gate plus global phase.
"""
from __future__ import annotations

import cmath
import math

import numpy as np
from scipy.linalg import cossin, schur

from .circuit import Circuit, CircuitError, Gate, GateKind, u_matrix


def zyz_angles(m: np.ndarray) -> tuple[float, float, float, float]:
    """``(theta, phi, lam, phase)`` with ``m == exp(i*phase) * U(theta, phi, lam)``."""
    det = np.linalg.det(m)
    phase = cmath.phase(det) / 2
    su = m * cmath.exp(-1j * phase)
    # su = [[e^{-i(phi+lam)/2} c, -e^{i(lam-phi)/2} s], [e^{i(phi-lam)/2} s, e^{i(phi+lam)/2} c]]
    c, s = abs(su[0, 0]), abs(su[1, 0])
    theta = 2 * math.atan2(s, c)
    if s < 1e-14:
        phi_plus_lam = 2 * cmath.phase(su[1, 1])
        phi, lam = phi_plus_lam, 0.0
    elif c < 1e-14:
        phi_minus_lam = 2 * cmath.phase(su[1, 0])
        phi, lam = phi_minus_lam, 0.0
    else:
        plus = 2 * cmath.phase(su[1, 1])
        minus = 2 * cmath.phase(su[1, 0])
        phi, lam = (plus + minus) / 2, (plus - minus) / 2
    # U(theta, phi, lam) = e^{i(phi+lam)/2} * su
    phase -= (phi + lam) / 2
    # pick the branch that reproduces m exactly (the halved phases may be off by pi)
    if not np.allclose(cmath.exp(1j * phase) * u_matrix(theta, phi, lam), m, atol=1e-9):
        phase += math.pi
    return theta, phi, lam, phase


def _append(c: Circuit, kind: GateKind, qubits, params=()) -> Circuit:
    return Circuit(c.num_qubits, c.ops + (Gate(kind, tuple(qubits), tuple(params)),), c.global_phase)


def _multiplexed_rotation(c: Circuit, kind: GateKind, angles, controls: list[int], target: int) -> Circuit:
    """Rotation ``angles[i]`` on ``target`` when the controls read index ``i``.

    ``controls[j]`` is bit ``j`` of the selecting index.
    """
    angles = list(angles)
    if not controls:
        if abs(angles[0]) > 1e-15:
            c = _append(c, kind, (target,), (angles[0],))
        return c
    msb = controls[-1]
    half = len(angles) // 2
    lo, hi = angles[:half], angles[half:]
    c = _multiplexed_rotation(c, kind, [(a + b) / 2 for a, b in zip(lo, hi)], controls[:-1], target)
    c = _append(c, GateKind.CX, (msb, target))
    c = _multiplexed_rotation(c, kind, [(a - b) / 2 for a, b in zip(lo, hi)], controls[:-1], target)
    c = _append(c, GateKind.CX, (msb, target))
    return c


def _demultiplex(a0: np.ndarray, a1: np.ndarray):
    """Write ``a0 (+) a1`` as ``(I (x) v) (d (+) d*) (I (x) w)``."""
    t, v = schur(a0 @ a1.conj().T, output="complex")
    eig = np.diag(t)
    d = np.sqrt(eig)
    w = np.diag(d) @ v.conj().T @ a1
    return v, d, w


def _qsd(c: Circuit, u: np.ndarray, qubits: list[int]) -> Circuit:
    if len(qubits) == 1:
        theta, phi, lam, phase = zyz_angles(u)
        c = _append(c, GateKind.U, (qubits[0],), (theta, phi, lam))
        return c.with_phase(phase)
    dim = u.shape[0]
    half = dim // 2
    (l0, l1), cs_theta, (r0, r1) = cossin(u, p=half, q=half, separate=True)
    top, lower = qubits[-1], qubits[:-1]
    # u = (l0 (+) l1) . [[C, -S], [S, C]] . (r0 (+) r1), applied right to left
    v, d, w = _demultiplex(r0, r1)
    c = _qsd(c, w, lower)
    c = _multiplexed_rotation(c, GateKind.RZ, [-2 * cmath.phase(x) for x in d], lower, top)
    c = _qsd(c, v, lower)
    c = _multiplexed_rotation(c, GateKind.RY, [2 * t for t in cs_theta], lower, top)
    v, d, w = _demultiplex(l0, l1)
    c = _qsd(c, w, lower)
    c = _multiplexed_rotation(c, GateKind.RZ, [-2 * cmath.phase(x) for x in d], lower, top)
    c = _qsd(c, v, lower)
    return c


def synthesize(u: np.ndarray) -> Circuit:
    """Circuit whose matrix (including global phase) equals the unitary ``u``."""
    u = np.asarray(u, dtype=np.complex128)
    dim = u.shape[0]
    n = dim.bit_length() - 1
    if u.shape != (dim, dim) or 1 << n != dim or n < 1:
        raise ValueError(f"expected a square 2^n matrix, got shape {u.shape}")
    if not np.allclose(u.conj().T @ u, np.eye(dim), atol=1e-10):
        raise ValueError("matrix is not unitary")
    return _qsd(Circuit(n), u, list(range(n)))


# -- controlled gates --------------------------------------------------------

def _controlled_u(c: Circuit, control: int, target: int, theta, phi, lam, phase=0.0) -> Circuit:
    # controlled (e^{i phase} U(theta, phi, lam)) with P on the control carrying the phase
    c = _append(c, GateKind.P, (control,), ((lam + phi) / 2 + phase,))
    c = _append(c, GateKind.P, (target,), ((lam - phi) / 2,))
    c = _append(c, GateKind.CX, (control, target))
    c = _append(c, GateKind.U, (target,), (-theta / 2, 0.0, -(phi + lam) / 2))
    c = _append(c, GateKind.CX, (control, target))
    c = _append(c, GateKind.U, (target,), (theta / 2, phi, 0.0))
    return c


def _ccp(c: Circuit, c0: int, c1: int, target: int, lam: float) -> Circuit:
    c = _append(c, GateKind.CP, (c1, target), (lam / 2,))
    c = _append(c, GateKind.CX, (c0, c1))
    c = _append(c, GateKind.CP, (c1, target), (-lam / 2,))
    c = _append(c, GateKind.CX, (c0, c1))
    c = _append(c, GateKind.CP, (c0, target), (lam / 2,))
    return c


def controlled(body: Circuit, control: int, qubit_map: list[int], num_qubits: int) -> Circuit:
    """Controlled version of a gate-only ``body`` (global phase included).

    ``qubit_map[i]`` is where qubit ``i`` of ``body`` lands in the
    ``num_qubits``-wide result; ``control`` must not be in the map.
    """
    if control in qubit_map:
        raise CircuitError("control qubit overlaps the controlled register")
    c = Circuit(num_qubits)
    for op in body.ops:
        if not isinstance(op, Gate):
            raise CircuitError("only gate-only circuits can be controlled")
        q = [qubit_map[i] for i in op.qubits]
        k = op.kind
        if k.num_qubits == 1:
            if k is GateKind.X:
                c = _append(c, GateKind.CX, (control, q[0]))
            elif k is GateKind.Z:
                c = _append(c, GateKind.CZ, (control, q[0]))
            elif k is GateKind.P:
                c = _append(c, GateKind.CP, (control, q[0]), op.params)
            else:
                theta, phi, lam, phase = zyz_angles(op.matrix())
                c = _controlled_u(c, control, q[0], theta, phi, lam, phase)
        elif k is GateKind.CX:
            c = _append(c, GateKind.CCX, (control, q[0], q[1]))
        elif k is GateKind.CZ:
            c = _append(c, GateKind.H, (q[1],))
            c = _append(c, GateKind.CCX, (control, q[0], q[1]))
            c = _append(c, GateKind.H, (q[1],))
        elif k is GateKind.SWAP:
            c = _append(c, GateKind.CX, (q[1], q[0]))
            c = _append(c, GateKind.CCX, (control, q[0], q[1]))
            c = _append(c, GateKind.CX, (q[1], q[0]))
        elif k is GateKind.CP:
            c = _ccp(c, control, q[0], q[1], op.params[0])
        else:
            raise CircuitError(f"no controlled form for {k.name}")
    if body.global_phase:
        c = _append(c, GateKind.P, (control,), (body.global_phase,))
    return c
