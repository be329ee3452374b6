"""Teleportation of one virtual qubit inside a single eight-level system."""

from .linalg import (
    Factorization,
    IDENTITY_2,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    approx_eq,
    basis_vector,
    dagger,
    eig_hermitian,
    identity,
    kron,
    partial_trace,
)
from .protocol import (
    BellBasis,
    BranchSummary,
    CorrectionSet,
    KrausSet,
    ProtocolReport,
    SwapComparison,
    THREE_QUBITS,
    bell_basis,
    bits_to_index,
    build_initial_state,
    compare_swap_vs_teleport,
    correction_set,
    derive_corrections,
    index_to_bits,
    kraus_set,
    measurement_branches,
    run_protocol,
    single_shot,
    swap_gate,
    teleport_channel,
)
from .states import (
    DensityMatrix,
    Ket,
    NotHermitian,
    NotPositive,
    QubitState,
    StateValidationError,
    TraceNotOne,
    fidelity_pure,
    ket,
    ket_to_density,
    purity,
    qubit_state,
    validate_density,
    von_neumann_entropy,
)

__version__ = "0.1.0"

__all__ = [
    "BellBasis",
    "BranchSummary",
    "CorrectionSet",
    "DensityMatrix",
    "Factorization",
    "IDENTITY_2",
    "Ket",
    "KrausSet",
    "NotHermitian",
    "NotPositive",
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
    "ProtocolReport",
    "QubitState",
    "StateValidationError",
    "SwapComparison",
    "THREE_QUBITS",
    "TraceNotOne",
    "approx_eq",
    "basis_vector",
    "bell_basis",
    "bits_to_index",
    "build_initial_state",
    "compare_swap_vs_teleport",
    "correction_set",
    "dagger",
    "derive_corrections",
    "eig_hermitian",
    "fidelity_pure",
    "identity",
    "index_to_bits",
    "ket",
    "ket_to_density",
    "kraus_set",
    "kron",
    "measurement_branches",
    "partial_trace",
    "purity",
    "qubit_state",
    "run_protocol",
    "single_shot",
    "swap_gate",
    "teleport_channel",
    "validate_density",
    "von_neumann_entropy",
]
