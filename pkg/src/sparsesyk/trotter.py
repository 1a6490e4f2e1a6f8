"""First- and second-order product formulas over commuting clusters.

Conventions
-----------
Circuits list gates in time order.  With clusters ``H_1..H_m`` (partition
order) a first-order step applies ``H_1`` first and ``H_m`` last, and a
second-order step applies half steps ``H_m..H_1`` then ``H_1..H_m``, so
``H_m`` is the split (outer) exponential and ``H_1`` sits in the middle.

Bounds are the nested-commutator estimates for these formulas.  For first
order the sum runs over clusters in application order::

    t^2/(2r) * sum_p || [ sum_{q>p} H_q , H_p ] ||

For second order the sum runs from the outermost cluster inward, i.e. over
``G_1..G_m = H_m..H_1``::

    t^3/(12 r^2) * sum_p || [ sum_{s>p} G_s , [ sum_{q>p} G_q , G_p ] ] ||
  + t^3/(24 r^2) * sum_p || [ G_p , [ G_p , sum_{s>p} G_s ] ] ||

Indexing the second-order sum from the middle instead is not a valid bound
(the outer exponential must carry the 1/24 weight).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .circuit import Circuit
from .clustering import Cluster, anticommutation_matrix, check_partition
from .diagonalize import DiagonalizedCluster, cluster_evolution_circuit, diagonalize_cluster
from .oracle import SizeCapExceeded, commutator, hermitian_norm
from .syk import PauliHamiltonian

__all__ = [
    "TrotterPlan",
    "ErrorBound",
    "plan_steps",
    "step_sequence",
    "diagonalize_all",
    "build_trotter_circuit",
    "bound_error_exact",
    "bound_error_pauli",
    "EXACT_BOUND_MAX_QUBITS",
]

EXACT_BOUND_MAX_QUBITS = 7


@dataclass(frozen=True)
class TrotterPlan:
    order: int
    t: float
    r: int
    epsilon: float = 0.01
    cluster_sequence: tuple[Cluster, ...] = ()

    def __post_init__(self):
        if self.order not in (1, 2):
            raise ValueError(f"order must be 1 or 2, got {self.order}")
        if self.r < 1:
            raise ValueError(f"r must be >= 1, got {self.r}")
        if not 0 < self.epsilon < 1:
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        object.__setattr__(self, "cluster_sequence", tuple(self.cluster_sequence))

    @property
    def dt(self) -> float:
        return self.t / self.r if self.order == 1 else self.t / (2 * self.r)


@dataclass(frozen=True)
class ErrorBound:
    value: float
    method: str
    order: int
    t: float
    r: int
    components: tuple[float, ...] = field(default=())

    def to_json(self) -> str:
        return json.dumps(
            {
                "order": self.order,
                "t": self.t,
                "r": self.r,
                "method": self.method,
                "value": self.value,
                "components": list(self.components),
            }
        ) + "\n"


def plan_steps(order: int, Jt: float, epsilon: float) -> int:
    """Trotter steps for target error ``epsilon`` at dimensionless time ``Jt``.

    Second order: ``ceil(Jt**1.5 / sqrt(epsilon))``; first order:
    ``ceil(Jt**2 / epsilon)``.  Never less than one.
    """
    if not Jt > 0:
        raise ValueError(f"Jt must be positive, got {Jt}")
    if not 0 < epsilon <= 1:
        raise ValueError(f"epsilon must lie in (0, 1], got {epsilon}")
    if order == 2:
        steps = Jt**1.5 / math.sqrt(epsilon)
    elif order == 1:
        steps = Jt**2 / epsilon
    else:
        raise ValueError(f"order must be 1 or 2, got {order}")
    # guard against ceil(8.000000000000002) style round-off
    return max(1, math.ceil(steps - 1e-9 * steps))


def step_sequence(m: int, order: int) -> list[int]:
    """Cluster indices of one step in time order."""
    forward = list(range(m))
    return forward if order == 1 else forward[::-1] + forward


def diagonalize_all(
    h: PauliHamiltonian, clusters: Sequence[Cluster], compress: bool = False
) -> list[DiagonalizedCluster]:
    ops = h.ops
    return [diagonalize_cluster([ops[i] for i in cl], compress) for cl in clusters]


def build_trotter_circuit(
    h: PauliHamiltonian,
    clusters: Sequence[Cluster],
    plan: TrotterPlan,
    *,
    merge_half_steps: bool = False,
    diagonalized: Sequence[DiagonalizedCluster] | None = None,
) -> Circuit:
    """Assemble ``plan.r`` product-formula steps over the cluster evolutions.

    With ``merge_half_steps`` the adjacent half steps of the outer cluster
    at repetition boundaries are fused into one evolution, for order 2.
    """
    check_partition(h, clusters)
    if plan.cluster_sequence and tuple(plan.cluster_sequence) != tuple(clusters):
        raise ValueError("plan.cluster_sequence does not match the given clusters")
    if diagonalized is None:
        diagonalized = diagonalize_all(h, clusters)
    coeffs = h.coeffs
    m = len(clusters)
    cache: dict[float, list[Circuit]] = {}

    def evo(j: int, dt: float) -> Circuit:
        if dt not in cache:
            cache[dt] = [
                cluster_evolution_circuit(dc, coeffs[list(cl)], dt)
                for dc, cl in zip(diagonalized, clusters)
            ]
        return cache[dt][j]

    dt = plan.dt
    seq = step_sequence(m, plan.order)
    if plan.order == 2 and merge_half_steps and m > 0:
        # H_m H_m at each boundary of the palindrome fuses into one full step
        parts = [evo(seq[0], dt)]
        for rep in range(plan.r):
            parts += [evo(j, dt) for j in seq[1:-1]]
            parts.append(evo(seq[-1], dt if rep == plan.r - 1 else 2 * dt))
        return Circuit.concat(h.n, parts)
    parts = [evo(j, dt) for _ in range(plan.r) for j in seq]
    return Circuit.concat(h.n, parts)


# --------------------------------------------------------------------------
# Error bounds

def _bound_order(clusters, order):
    return list(clusters) if order == 1 else list(clusters)[::-1]


def _prefactor(order, t, r, J, coupling_prefactor):
    scale = J**(order + 1) if coupling_prefactor else 1.0
    if order == 1:
        return scale * t**2 / (2 * r), None
    return scale * t**3 / (12 * r**2), scale * t**3 / (24 * r**2)


def bound_error_exact(
    h: PauliHamiltonian,
    clusters: Sequence[Cluster],
    order: int,
    t: float,
    r: int,
    *,
    J: float = 1.0,
    coupling_prefactor: bool = False,
) -> ErrorBound:
    """Commutator bound with exact dense spectral norms (``n <= 7``).

    ``coupling_prefactor`` additionally multiplies by ``J**2`` (order 1) or
    ``J**3`` (order 2); only the default is guaranteed to bound the error.
    """
    if h.n > EXACT_BOUND_MAX_QUBITS:
        raise SizeCapExceeded(f"exact bound limited to {EXACT_BOUND_MAX_QUBITS} qubits, got {h.n}")
    seq = _bound_order(clusters, order)
    mats = [h.subset(cl).to_matrix() for cl in seq]
    dim = 1 << h.n
    # tails[p] = sum of clusters after position p
    tails = [np.zeros((dim, dim), dtype=complex) for _ in mats]
    acc = np.zeros((dim, dim), dtype=complex)
    for p in range(len(mats) - 1, -1, -1):
        tails[p] = acc.copy()
        acc += mats[p]

    c1, c2 = _prefactor(order, t, r, J, coupling_prefactor)
    components = []
    if order == 1:
        for hp, tail in zip(mats, tails):
            components.append(c1 * hermitian_norm(commutator(tail, hp)))
    else:
        for hp, tail in zip(mats, tails):
            inner = commutator(tail, hp)
            components.append(
                c1 * hermitian_norm(commutator(tail, inner))
                + c2 * hermitian_norm(commutator(hp, commutator(hp, tail)))
            )
    return ErrorBound(float(sum(components)), "exact_commutator", order, t, r, tuple(components))


def _nested_pauli_sum(xa, za, wa, xb, zb, wb, xc, zc, wc, chunk=4096) -> float:
    """``sum_{a,b,c} |a||b||c| ||[P_a, [P_b, P_c]]||`` over three term sets.

    ``||[P_a,[P_b,P_c]]||`` is 4 when ``P_b, P_c`` anticommute and ``P_a``
    anticommutes with ``P_b P_c``, otherwise 0.
    """
    if not (len(wa) and len(wb) and len(wc)):
        return 0.0
    anti_bc = anticommutation_matrix(xb, zb, xc, zc)
    ib, ic = np.nonzero(anti_bc)
    total = 0.0
    for s in range(0, len(ib), chunk):
        b, c = ib[s:s + chunk], ic[s:s + chunk]
        px = xb[b] ^ xc[c]
        pz = zb[b] ^ zc[c]
        anti = anticommutation_matrix(px, pz, xa, za)
        total += float(np.sum((anti @ wa) * wb[b] * wc[c]))
    return 4.0 * total


def bound_error_pauli(
    h: PauliHamiltonian,
    clusters: Sequence[Cluster],
    order: int,
    t: float,
    r: int,
    *,
    J: float = 1.0,
    coupling_prefactor: bool = False,
) -> ErrorBound:
    """Triangle-inequality relaxation of :func:`bound_error_exact` over Pauli terms.

    Each commutator norm is replaced by the sum of ``|coefficients| *
    ||commutator of Pauli strings||``; no dense matrices, any size.
    """
    x, z = h.symplectic()
    w = np.abs(h.coeffs)
    seq = [np.array(list(cl), dtype=int) for cl in _bound_order(clusters, order)]
    tails = []
    for p in range(len(seq)):
        rest = seq[p + 1:]
        tails.append(np.concatenate(rest) if rest else np.zeros(0, dtype=int))

    c1, c2 = _prefactor(order, t, r, J, coupling_prefactor)
    components = []
    for idx, tail in zip(seq, tails):
        if order == 1:
            anti = anticommutation_matrix(x[tail], z[tail], x[idx], z[idx])
            components.append(c1 * 2.0 * float(w[tail] @ anti @ w[idx]))
        else:
            outer = _nested_pauli_sum(
                x[tail], z[tail], w[tail], x[tail], z[tail], w[tail], x[idx], z[idx], w[idx]
            )
            inner = _nested_pauli_sum(
                x[idx], z[idx], w[idx], x[idx], z[idx], w[idx], x[tail], z[tail], w[tail]
            )
            components.append(c1 * outer + c2 * inner)
    return ErrorBound(float(sum(components)), "pauli_analytic", order, t, r, tuple(components))
