"""Reference implementations used only by the tests.

Each is written from the textbook definition without sharing code with the
package: exact rational arithmetic, brute-force enumeration, dense matrices.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

S2 = 1 / math.sqrt(2)


def fisher_bruteforce(table) -> float:
    """Two-sided Fisher p by enumerating every table with the same margins."""
    (a, b), (c, d) = table
    r0, r1, c0 = a + b, c + d, a + c
    n = r0 + r1

    def prob(x):
        return Fraction(math.comb(r0, x) * math.comb(r1, c0 - x), math.comb(n, c0))

    observed = prob(a)
    total = Fraction(0)
    for x in range(max(0, c0 - r1), min(r0, c0) + 1):
        px = prob(x)
        if px <= observed * Fraction(10_000_001, 10_000_000):
            total += px
    return float(min(total, Fraction(1)))


def binomial_bruteforce(k: int, n: int, p0: float) -> float:
    """Two-sided exact binomial p with rational arithmetic."""
    p = Fraction(p0)

    def prob(x):
        return math.comb(n, x) * p ** x * (1 - p) ** (n - x)

    observed = prob(k)
    return float(min(Fraction(1), sum(prob(x) for x in range(n + 1) if prob(x) <= observed * Fraction(10_000_001, 10_000_000))))


def holm_by_adjusted_p(pvals: list[float], alpha: float) -> set[int]:
    """Holm via adjusted p-values: p_adj(k) = max_{j<=k} (m-j+1) p_(j)."""
    m = len(pvals)
    order = sorted(range(m), key=lambda i: pvals[i])
    out, running = set(), 0.0
    for j, i in enumerate(order):
        running = max(running, min(1.0, (m - j) * pvals[i]))
        if running <= alpha:
            out.add(i)
    return out


def mid_ranks(xs):
    out = []
    for x in xs:
        less = sum(1 for y in xs if y < x)
        equal = sum(1 for y in xs if y == x)
        out.append(less + (equal + 1) / 2)
    return out


def spearman_reference(xs, ys) -> float:
    rx, ry = mid_ranks(xs), mid_ranks(ys)
    mx, my = sum(rx) / len(rx), sum(ry) / len(ry)
    num = sum((a - mx) * (b - my) for a, b in zip(rx, ry))
    den = math.sqrt(sum((a - mx) ** 2 for a in rx) * sum((b - my) ** 2 for b in ry))
    return num / den


# -- dense matrix simulator ------------------------------------------------------

ONE_QUBIT = {
    "h": np.array([[S2, S2], [S2, -S2]]),
    "x": np.array([[0, 1], [1, 0]]),
    "y": np.array([[0, -1j], [1j, 0]]),
    "z": np.array([[1, 0], [0, -1]]),
    "s": np.diag([1, 1j]),
    "sdg": np.diag([1, -1j]),
    "t": np.diag([1, np.exp(1j * np.pi / 4)]),
    "tdg": np.diag([1, np.exp(-1j * np.pi / 4)]),
}


def one_qubit_matrix(name, params):
    if name in ONE_QUBIT:
        return np.asarray(ONE_QUBIT[name], dtype=complex)
    if name == "rx":
        (a,) = params
        return np.array([[np.cos(a / 2), -1j * np.sin(a / 2)], [-1j * np.sin(a / 2), np.cos(a / 2)]])
    if name == "ry":
        (a,) = params
        return np.array([[np.cos(a / 2), -np.sin(a / 2)], [np.sin(a / 2), np.cos(a / 2)]], dtype=complex)
    if name == "rz":
        (a,) = params
        return np.diag([np.exp(-0.5j * a), np.exp(0.5j * a)])
    if name == "p":
        (a,) = params
        return np.diag([1, np.exp(1j * a)])
    if name == "u":
        t, p, l = params
        return np.array(
            [[np.cos(t / 2), -np.exp(1j * l) * np.sin(t / 2)],
             [np.exp(1j * p) * np.sin(t / 2), np.exp(1j * (p + l)) * np.cos(t / 2)]]
        )
    raise KeyError(name)


def embed(n: int, qubits, fn) -> np.ndarray:
    """Full 2^n matrix from ``fn(in_bits) -> {out_bits: amplitude}`` over the gate qubits."""
    dim = 2 ** n
    m = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        bits = tuple((col >> q) & 1 for q in qubits)
        for out_bits, amp in fn(bits).items():
            row = col
            for q, b in zip(qubits, out_bits):
                row = (row & ~(1 << q)) | (b << q)
            m[row, col] += amp
    return m


def gate_full_matrix(n: int, name: str, qubits, params) -> np.ndarray:
    if len(qubits) == 1:
        u = one_qubit_matrix(name, params)
        return embed(n, qubits, lambda b: {(0,): u[0, b[0]], (1,): u[1, b[0]]})
    if name == "cx":
        return embed(n, qubits, lambda b: {(b[0], b[1] ^ b[0]): 1})
    if name == "cz":
        return embed(n, qubits, lambda b: {b: -1 if b == (1, 1) else 1})
    if name == "cp":
        return embed(n, qubits, lambda b: {b: np.exp(1j * params[0]) if b == (1, 1) else 1})
    if name == "swap":
        return embed(n, qubits, lambda b: {(b[1], b[0]): 1})
    if name == "ccx":
        return embed(n, qubits, lambda b: {(b[0], b[1], b[2] ^ (b[0] & b[1])): 1})
    raise KeyError(name)


def dense_state(circuit) -> np.ndarray:
    """Statevector by multiplying full matrices; Initialize is a tensor product onto |0>."""
    n = circuit.num_qubits
    psi = np.zeros(2 ** n, dtype=complex)
    psi[0] = 1
    for op in circuit.ops:
        name = type(op).__name__
        if name == "Gate":
            psi = gate_full_matrix(n, op.kind.value, op.qubits, op.params) @ psi
        elif name == "Initialize":
            new = np.zeros_like(psi)
            for idx in range(2 ** n):
                if not psi[idx]:
                    continue
                for k, amp in enumerate(op.state):
                    j = idx
                    for pos, q in enumerate(op.targets):
                        j = (j & ~(1 << q)) | (((k >> pos) & 1) << q)
                    new[j] += psi[idx] * amp
            psi = new
        else:
            raise ValueError("dense_state does not handle measurements")
    return psi * np.exp(1j * circuit.global_phase)


def dense_unitary(circuit) -> np.ndarray:
    n = circuit.num_qubits
    u = np.eye(2 ** n, dtype=complex)
    for g in circuit.ops:
        u = gate_full_matrix(n, g.kind.value, g.qubits, g.params) @ u
    return u * np.exp(1j * circuit.global_phase)


def dft_matrix(n: int) -> np.ndarray:
    dim = 2 ** n
    w = np.exp(2j * np.pi / dim)
    return np.array([[w ** (j * k) for k in range(dim)] for j in range(dim)]) / np.sqrt(dim)
