import numpy as np
import pytest

from qprop.circuit import Circuit
from qprop.generators import haar_unitary
from qprop.simulator import circuit_unitary
from qprop.synthesis import controlled, synthesize, zyz_angles
from qprop.circuit import u_matrix


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_synthesize_is_exact(n):
    for seed in range(3):
        u = haar_unitary(n, seed)
        assert np.allclose(circuit_unitary(synthesize(u)), u, atol=1e-9)


def test_zyz_roundtrip():
    u = haar_unitary(1, 9)
    theta, phi, lam, phase = zyz_angles(u)
    assert np.allclose(np.exp(1j * phase) * u_matrix(theta, phi, lam), u, atol=1e-10)


def test_controlled_block_structure():
    body = synthesize(haar_unitary(2, 2))
    c = controlled(body, 0, [1, 2], 3)
    u = circuit_unitary(c)
    # control = qubit 0: odd indices carry the body
    inner = circuit_unitary(body)
    assert np.allclose(u[0::2, 0::2], np.eye(4), atol=1e-9)
    assert np.allclose(u[1::2, 1::2], inner, atol=1e-9)
    assert np.allclose(u[0::2, 1::2], 0, atol=1e-9)


def test_controlled_global_phase_becomes_relative():
    body = Circuit(1).with_phase(0.7)
    u = circuit_unitary(controlled(body, 1, [0], 2))
    assert np.allclose(np.diag(u), [1, 1, np.exp(0.7j), np.exp(0.7j)])
