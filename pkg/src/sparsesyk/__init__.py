"""Trotter circuit compiler and resource estimator for the sparse SYK model."""

from .circuit import (
    Circuit,
    Gate,
    ResourceReport,
    ResourceStats,
    count_gates,
    emit_qasm,
    parse_qasm,
    transpile_clifford_t,
)
from .clustering import Cluster, build_commutation_graph, partition_commuting
from .diagonalize import cluster_evolution_circuit, diagonalize_cluster
from .pauli import PauliString, commutes, conjugate_by_gate, multiply, weight
from .pipeline import Certificate, Compiled, certify, compile_hamiltonian, step_resources
from .syk import (
    PauliHamiltonian,
    SykInstance,
    SykTerm,
    hamiltonian_matrix,
    jordan_wigner,
    majorana_to_pauli,
    p_from_k,
    sample_couplings,
    sample_instance,
)
from .trotter import (
    ErrorBound,
    TrotterPlan,
    bound_error_exact,
    bound_error_pauli,
    build_trotter_circuit,
    plan_steps,
)

__version__ = "0.1.0"
