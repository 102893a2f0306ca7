"""Property-based testing for quantum circuits on a seeded statevector simulator."""
from .analysis import ExecutionStats
from .assertions import AssertionVerdict, InvalidAssertion
from .circuit import ALL_BASES, Basis, Circuit, CircuitError, Gate, GateKind
from .engine import Checks, PreconditionTimeout, Property, SuiteResult, TestConfig, reproduce, run_suite
from .generators import GroverOracle, RandomInt, RandomState, RandomUnitary, UCNOTStatePrep, DeutschJozsaOracle
from .qasm import from_qasm, to_qasm
from .simulator import Counts, StateVector, sample_counts, statevector

__all__ = [
    "ALL_BASES", "AssertionVerdict", "Basis", "Checks", "Circuit", "CircuitError", "Counts",
    "DeutschJozsaOracle", "ExecutionStats", "Gate", "GateKind", "GroverOracle", "InvalidAssertion",
    "PreconditionTimeout", "Property", "RandomInt", "RandomState", "RandomUnitary", "StateVector",
    "SuiteResult", "TestConfig", "UCNOTStatePrep", "from_qasm", "reproduce", "run_suite",
    "sample_counts", "statevector", "to_qasm",
]
__version__ = "0.1.0"
