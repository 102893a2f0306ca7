import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import dense_state, dense_unitary, gate_full_matrix
from qprop.circuit import Basis, Circuit, Gate, GateKind
from qprop.generators import random_state, random_unitary
from qprop.simulator import (
    Counts, SimulationError, StateVector, circuit_unitary, equal_up_to_global_phase,
    marginal_distribution, sample_counts, sample_distribution, statevector,
)

KINDS = [k for k in GateKind]


@st.composite
def circuits(draw, max_qubits=4, max_gates=12):
    n = draw(st.integers(3, max_qubits))
    c = Circuit(n)
    for _ in range(draw(st.integers(0, max_gates))):
        kind = draw(st.sampled_from(KINDS))
        qubits = draw(st.permutations(range(n)))[: kind.num_qubits]
        params = [draw(st.floats(-7, 7)) for _ in range(kind.num_params)]
        c = c.gate(kind, qubits, params)
    return c


@given(circuits())
@settings(max_examples=80, deadline=None)
def test_statevector_matches_dense_oracle(c):
    assert np.allclose(statevector(c).amplitudes, dense_state(c), atol=1e-9)
    assert abs(np.linalg.norm(statevector(c).amplitudes) - 1) < 1e-9


@pytest.mark.parametrize("kind", KINDS)
def test_each_gate_matrix(kind):
    n = 3
    qubits = [2, 0, 1][: kind.num_qubits]
    params = [0.7, -1.1, 2.3][: kind.num_params]
    c = Circuit(n).gate(kind, qubits, params)
    assert np.allclose(circuit_unitary(c), gate_full_matrix(n, kind.value, qubits, params), atol=1e-12)


def test_initialize_loads_state_on_targets():
    psi = random_state(2, 5).amplitudes
    c = Circuit(3).initialize(psi, [0, 2])
    assert np.allclose(statevector(c).amplitudes, dense_state(c))


def test_little_endian():
    sv = statevector(Circuit(2).x(0))
    assert np.allclose(sv.amplitudes, [0, 1, 0, 0])


def test_marginal_order_follows_qubit_list():
    sv = statevector(Circuit(3).x(2))
    assert np.allclose(marginal_distribution(sv, [2, 0]), [0, 1, 0, 0])
    assert np.allclose(marginal_distribution(sv, [0, 2]), [0, 0, 1, 0])


def test_ghz_marginals():
    sv = statevector(Circuit(3).h(0).cx(0, 1).cx(1, 2))
    assert np.allclose(marginal_distribution(sv, [0, 1, 2]), [0.5, 0, 0, 0, 0, 0, 0, 0.5])
    assert np.allclose(marginal_distribution(sv, [1]), [0.5, 0.5])


def test_sampling_is_seeded_and_keyed_by_qubit_order():
    c = Circuit(2).h(0).cx(0, 1).measure(0).measure(1)
    a, b = sample_counts(c, 1000, 3), sample_counts(c, 1000, 3)
    assert a == b
    assert set(a.counts) <= {"00", "11"}
    assert sum(a.counts.values()) == 1000
    assert sample_counts(Circuit(2).x(1).measure(0).measure(1), 10, 0).counts == {"01": 10}


def test_basis_measurement():
    c = Circuit(1).h(0).measure(0, Basis.X)
    assert sample_counts(c, 100, 0).counts == {"0": 100}
    c = Circuit(1).h(0).s(0).measure(0, Basis.Y)
    assert sample_counts(c, 100, 0).counts == {"0": 100}


def test_sampling_errors():
    with pytest.raises(SimulationError):
        sample_counts(Circuit(1).h(0), 10, 0)
    with pytest.raises(SimulationError):
        statevector(Circuit(1).measure(0))


def test_sample_distribution_frequencies():
    counts = sample_distribution(np.array([0.2, 0.8]), [0], 20000, 1)
    assert counts["0"] / 20000 == pytest.approx(0.2, abs=0.02)


def test_counts_marginal_and_most_frequent():
    c = Counts({"00": 3, "01": 5, "11": 2}, (0, 1), 10)
    m = c.marginal([1])
    assert m.counts == {"0": 3, "1": 7}
    assert c.most_frequent() == ["01"]
    assert Counts({"0": 5, "1": 5}, (0,), 10).most_frequent() == ["0", "1"]


def test_statevector_validation():
    with pytest.raises(ValueError):
        StateVector(np.array([1, 1]))
    with pytest.raises(ValueError):
        StateVector(np.array([1, 0, 0]))


def test_unitary_matches_dense_and_phase_equality():
    c = random_unitary(3, 4)
    u = circuit_unitary(c)
    assert np.allclose(u, dense_unitary(c), atol=1e-9)
    assert equal_up_to_global_phase(u, u * np.exp(0.3j))
    assert not equal_up_to_global_phase(u, np.eye(8))
    assert np.allclose(u.conj().T @ u, np.eye(8), atol=1e-9)
