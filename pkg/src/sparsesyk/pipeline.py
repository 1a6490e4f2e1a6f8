"""End-to-end helpers: instance -> clusters -> circuits -> counts / certificates."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import DEFAULT_EPS_ROT, Circuit, ResourceReport, transpile_clifford_t
from .clustering import Cluster, partition_commuting
from .diagonalize import DiagonalizedCluster
from .oracle import circuit_unitary, exact_unitary, operator_norm_diff
from .syk import PauliHamiltonian, SykInstance, jordan_wigner
from .trotter import (
    EXACT_BOUND_MAX_QUBITS,
    TrotterPlan,
    bound_error_exact,
    bound_error_pauli,
    build_trotter_circuit,
    diagonalize_all,
)

__all__ = [
    "Compiled",
    "compile_hamiltonian",
    "step_resources",
    "Certificate",
    "certify",
    "loglog_slope",
    "BOUND_ATOL",
]

# slack for floating-point noise in "measured <= bound" comparisons
BOUND_ATOL = 1e-10


@dataclass(frozen=True)
class Compiled:
    h: PauliHamiltonian
    clusters: tuple[Cluster, ...]
    diagonalized: tuple[DiagonalizedCluster, ...]

    def circuit(self, plan: TrotterPlan, merge_half_steps: bool = False) -> Circuit:
        return build_trotter_circuit(
            self.h, self.clusters, plan,
            merge_half_steps=merge_half_steps, diagonalized=self.diagonalized,
        )


def compile_hamiltonian(source, strategy: str = "largest_first", compress: bool = False) -> Compiled:
    """Cluster and diagonalize once; accepts an instance or a Pauli Hamiltonian.

    ``compress`` enables the optional CNOT compression of the diagonalized
    Z strings (see :func:`~sparsesyk.diagonalize.diagonalize_cluster`).
    """
    h = jordan_wigner(source) if isinstance(source, SykInstance) else source
    clusters = tuple(partition_commuting(h, strategy))
    return Compiled(h, clusters, tuple(diagonalize_all(h, clusters, compress)))


def step_resources(
    compiled: Compiled, order: int = 1, dt: float = 1.0, eps_rot: float = DEFAULT_EPS_ROT
) -> ResourceReport:
    """Transpiled gate counts of a single Trotter step of step size ``dt``."""
    plan = TrotterPlan(order, dt if order == 1 else 2 * dt, 1)
    _, report = transpile_clifford_t(compiled.circuit(plan), eps_rot)
    return report


@dataclass(frozen=True)
class Certificate:
    order: int
    t: float
    r: int
    measured: float
    exact_bound: float
    pauli_bound: float

    @property
    def passed(self) -> bool:
        return (
            self.measured <= self.exact_bound + BOUND_ATOL
            and self.exact_bound <= self.pauli_bound + BOUND_ATOL
        )

    def to_dict(self) -> dict:
        return {
            "order": self.order, "t": self.t, "r": self.r,
            "measured": self.measured, "exact_bound": self.exact_bound,
            "pauli_bound": self.pauli_bound, "passed": self.passed,
        }


def certify(compiled: Compiled, order: int, t: float, r: int, u_exact=None) -> Certificate:
    """Compare the Trotter circuit against ``exp(-iHt)`` and both error bounds."""
    h = compiled.h
    if h.n > EXACT_BOUND_MAX_QUBITS:
        raise ValueError(f"certification needs n <= {EXACT_BOUND_MAX_QUBITS} qubits, got {h.n}")
    if u_exact is None:
        u_exact = exact_unitary(h.to_matrix(), t)
    u_circ = circuit_unitary(compiled.circuit(TrotterPlan(order, t, r)))
    measured = operator_norm_diff(u_exact, u_circ)
    exact = bound_error_exact(h, compiled.clusters, order, t, r).value
    pauli = bound_error_pauli(h, compiled.clusters, order, t, r).value
    return Certificate(order, float(t), int(r), float(measured), exact, pauli)


def loglog_slope(xs, ys) -> float:
    return float(np.polyfit(np.log(np.asarray(xs, float)), np.log(np.asarray(ys, float)), 1)[0])
