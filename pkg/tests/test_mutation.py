import numpy as np
import pytest

from qprop.circuit import Circuit, Gate, GateKind
from qprop.corpus import FIXTURES
from qprop.mutation import (
    IDENTITY_PAIRS, MutantKind, MutationError, MutationOperator, apply_operator,
    generate_equivalent_mutants, generate_faulty_mutants, mutation_score, same_state_from_zero, unitarily_equal,
)
from qprop.rng import make_rng
from qprop.simulator import circuit_unitary, equal_up_to_global_phase, statevector


def test_delete_on_single_gate_circuit():
    c, desc = apply_operator(Circuit(1).h(0), MutationOperator.GATE_DELETE, make_rng(0))
    assert c.ops == () and desc.startswith("delete")


def test_replace_keeps_arity_and_qubits():
    base = Circuit(2).h(0).cx(0, 1)
    for s in range(30):
        m, _ = apply_operator(base, MutationOperator.GATE_REPLACE, make_rng(s))
        assert len(m.ops) == 2
        for old, new in zip(base.ops, m.ops):
            assert old.qubits == new.qubits and old.kind.num_qubits == new.kind.num_qubits
        assert m != base


def test_replace_h_with_x_changes_bell_state():
    bell = Circuit(2).h(0).cx(0, 1)
    mutant = Circuit(2, (Gate(GateKind.X, (0,)), bell.ops[1]))
    assert not same_state_from_zero(bell, mutant)
    assert np.allclose(statevector(mutant).amplitudes, [0, 0, 0, 1])


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_ten_faulty_mutants(name):
    prog = FIXTURES[name].program
    muts = generate_faulty_mutants(prog, 10, FIXTURES[name].mutant_seed)
    assert len(muts) == 10 and len({m.circuit.digest for m in muts}) == 10
    for m in muts:
        assert m.kind is MutantKind.FAULTY and m.base_digest == prog.digest
        assert not same_state_from_zero(m.circuit, prog)


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_ten_equivalent_mutants(name):
    prog = FIXTURES[name].program
    muts = generate_equivalent_mutants(prog, 10, FIXTURES[name].mutant_seed)
    assert len({m.circuit.digest for m in muts}) == 10
    for m in muts:
        assert equal_up_to_global_phase(circuit_unitary(m.circuit), circuit_unitary(prog))
        assert len(m.circuit.ops) == len(prog.ops) + 2


def test_identity_catalog():
    for a, b in IDENTITY_PAIRS:
        qubits = tuple(range(a.num_qubits))
        c = Circuit(2, (Gate(a, qubits), Gate(b, qubits)))
        assert unitarily_equal(c, Circuit(2))


def test_mutants_are_seeded():
    prog = FIXTURES["qft"].program
    a = [m.circuit.digest for m in generate_faulty_mutants(prog, 5, 1)]
    b = [m.circuit.digest for m in generate_faulty_mutants(prog, 5, 1)]
    c = [m.circuit.digest for m in generate_faulty_mutants(prog, 5, 2)]
    assert a == b != c


def test_empty_circuit_cannot_be_mutated():
    with pytest.raises(MutationError):
        generate_faulty_mutants(Circuit(1), 1, 0)


def test_mutation_score():
    assert mutation_score([True] * 9 + [False]) == 0.9
    assert mutation_score([False] * 10) == 0.0
    with pytest.raises(ValueError):
        mutation_score([])
