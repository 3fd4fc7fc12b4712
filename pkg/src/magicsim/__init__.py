"""Exact Clifford/stabilizer simulation with noisy one-qubit ancillas:
distillation of the two magic-state families, the gate-injection circuits
that turn them into non-Clifford phase gates, and the closed-form error maps
cross-checked against a dense statevector oracle.
"""

from ._accel import backend_name
from .magic import Qubit1State, dephase_H, dephase_T, enumerate_c1, epsilon_of, \
    fidelity_H, fidelity_T, in_octahedron
from .pauli import PauliString, commutes, multiply, weight
from .statevec import BitmaskOp, ProjectorSpec, StateVector
from .tableau import CliffordGate, StabilizerTableau, sample_octahedron_prep

__version__ = "0.1.0"

__all__ = [
    "BitmaskOp",
    "CliffordGate",
    "PauliString",
    "ProjectorSpec",
    "Qubit1State",
    "StabilizerTableau",
    "StateVector",
    "backend_name",
    "commutes",
    "dephase_H",
    "dephase_T",
    "enumerate_c1",
    "epsilon_of",
    "fidelity_H",
    "fidelity_T",
    "in_octahedron",
    "multiply",
    "sample_octahedron_prep",
    "weight",
    "__version__",
]
