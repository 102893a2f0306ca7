import math

import numpy as np
import pytest

from qprop.circuit import (
    ALL_BASES, Basis, Circuit, CircuitError, Gate, GateKind, Initialize, Measure,
    canonical_hash, compose, insert_basis_change, measure, new_circuit,
)


def test_new_circuit_requires_a_qubit():
    assert new_circuit(2).num_qubits == 2
    with pytest.raises(CircuitError):
        Circuit(0)


def test_gate_validation():
    with pytest.raises(CircuitError):
        Gate(GateKind.CX, (0,))
    with pytest.raises(CircuitError):
        Gate(GateKind.RX, (0,))
    with pytest.raises(CircuitError):
        Gate(GateKind.CX, (1, 1))
    with pytest.raises(CircuitError):
        Gate(GateKind.RZ, (0,), (math.inf,))
    with pytest.raises(CircuitError):
        Circuit(2).h(2)


def test_builders_are_persistent():
    a = Circuit(2).h(0)
    b = a.cx(0, 1)
    assert len(a) == 1 and len(b) == 2


def test_digest_is_structural():
    a = Circuit(2).h(0).cx(0, 1)
    b = Circuit(2).h(0).cx(0, 1)
    assert a == b and hash(a) == hash(b) and a.digest == canonical_hash(b)
    assert a != Circuit(2).h(1).cx(0, 1)
    assert Circuit(1).rz(0.1, 0) != Circuit(1).rz(0.1 + 1e-16 * 8, 0)
    assert a != a.with_phase(0.5)


def test_initialize_rules():
    c = Circuit(3).initialize([0, 1], [1])
    assert isinstance(c.ops[0], Initialize)
    with pytest.raises(CircuitError):
        Circuit(2).h(0).initialize([1, 0], [0])
    with pytest.raises(CircuitError):
        Circuit(2).initialize([1, 1], [0])
    with pytest.raises(CircuitError):
        Circuit(2).initialize([1, 0, 0, 0], [1, 0])


def test_measure_inserts_basis_change():
    c = measure(Circuit(1), 0, Basis.X)
    assert [op.kind for op in c.gates] == [GateKind.H]
    c = measure(Circuit(1), 0, Basis.Y)
    assert [op.kind for op in c.gates] == [GateKind.SDG, GateKind.H]
    assert c.measurements == [Measure(0, Basis.Y, 0)]
    assert insert_basis_change(Circuit(1), 0, Basis.Z) == Circuit(1)


def test_no_gate_after_measure():
    c = Circuit(2).measure(0)
    with pytest.raises(CircuitError):
        c.x(0)
    with pytest.raises(CircuitError):
        c.measure(0)
    c.x(1)  # other qubits stay usable


def test_compose_maps_qubits():
    inner = Circuit(2).cx(0, 1)
    c = compose(Circuit(3), inner, [2, 0])
    assert c.ops[0] == Gate(GateKind.CX, (2, 0))
    with pytest.raises(CircuitError):
        compose(Circuit(3), inner, [1, 1])
    with pytest.raises(CircuitError):
        compose(Circuit(3), inner, [0])


def test_compose_reorders_initialize_targets():
    # |q0 q1> = |1>|0>: index 1. Mapped onto (2, 0) so qubit 2 holds 1.
    inner = Circuit(2).initialize([0, 1, 0, 0], [0, 1])
    c = compose(Circuit(3), inner, [2, 0])
    init = c.ops[0]
    assert init.targets == (0, 2)
    assert np.allclose(init.state, [0, 0, 1, 0])


def test_inverse_and_phase():
    c = Circuit(1).u(0.3, 0.4, 0.5, 0).s(0).with_phase(0.2)
    inv = c.inverse()
    assert inv.global_phase == pytest.approx(-0.2)
    assert [g.kind for g in inv.gates] == [GateKind.SDG, GateKind.U]
    with pytest.raises(CircuitError):
        Circuit(1).initialize([1, 0], [0]).inverse()


def test_all_bases_order():
    assert ALL_BASES == (Basis.Z, Basis.X, Basis.Y)
