"""Clifford diagonalization of commuting Pauli clusters and their evolution circuits."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .circuit import CNOT, CZ, RZ, Circuit, Gate, H, Sdg
from .pauli import PauliString, commutes, conjugate_by_gate, conjugate_table

__all__ = [
    "NonCommutingClusterError",
    "DiagonalizedCluster",
    "diagonalize_cluster",
    "conjugate_by_circuit",
    "rotation_ladder",
    "cluster_evolution_circuit",
]


class NonCommutingClusterError(ValueError):
    def __init__(self, i: int, j: int, p: PauliString, q: PauliString):
        super().__init__(f"cluster terms {i} ({p}) and {j} ({q}) anticommute")
        self.pair = (i, j)


@dataclass(frozen=True)
class DiagonalizedCluster:
    """``clifford`` maps each cluster Pauli ``P_i`` to ``sign_i * Z(support_i)``."""

    clifford: Circuit
    z_strings: tuple[tuple[int, tuple[int, ...]], ...]

    @property
    def n_qubits(self) -> int:
        return self.clifford.n_qubits


def conjugate_by_circuit(p: PauliString, circuit: Circuit) -> PauliString:
    """Push ``p`` through the gates in order: ``C p C^dagger``."""
    for g in circuit.gates:
        p = conjugate_by_gate(p, g)
    return p


def _lowest_bit(v: int) -> int:
    return (v & -v).bit_length() - 1


def _x_echelon(paulis: Sequence[PauliString]) -> list[tuple[int, int, int]]:
    """Reduced row echelon form of the cluster's X block.

    Row operations are free (they only change which products of cluster
    terms we look at, not the circuit).  Returns ``(pivot_qubit, x, z)`` for
    the generators with a nonzero X part; pivots are the lowest available
    qubit and every pivot column is zero in all other returned rows.
    """
    rows = [(p.x, p.z) for p in paulis]
    out: list[tuple[int, int, int]] = []
    while True:
        rows = [r for r in rows if r[0]]
        if not rows:
            return out
        q = min(_lowest_bit(x) for x, _ in rows)
        k = next(i for i, (x, _) in enumerate(rows) if (x >> q) & 1)
        px, pz = rows.pop(k)
        rows = [(x ^ px, z ^ pz) if (x >> q) & 1 else (x, z) for x, z in rows]
        out = [(c, x ^ px, z ^ pz) if (x >> q) & 1 else (c, x, z) for c, x, z in out]
        out.append((q, px, pz))


def diagonalize_cluster(paulis: Sequence[PauliString], compress: bool = False) -> DiagonalizedCluster:
    """Build a Clifford circuit mapping every (commuting, Hermitian) Pauli to a ±Z string.

    Symplectic Gaussian elimination on the cluster tableau.  Row-reducing
    the X block gives generators whose X parts are ``e_c + (non-pivot
    bits)`` with distinct pivots ``c``.  Then, acting on columns:

    1. ``CNOT(c, j)`` clears each non-pivot X bit ``j`` of the generator
       with pivot ``c``; the X block becomes the identity on the pivots.
    2. Commutation makes the pivot-by-pivot Z block symmetric; ``CZ``
       clears its off-diagonal ones and ``Sdg`` its diagonal (Y -> X).
    3. ``H`` on every pivot swaps the now bare X's for Z's.

    Every cluster term is a product of generators and so ends up Z-only.

    With ``compress`` (off by default) a final CNOT network, see
    :func:`_compress_chain`, lowers the weight of the Z images so that long
    Jordan-Wigner parity chains shared by several terms are paid for once
    per cluster instead of once per rotation.  Clusters that are already
    Z-only get the empty circuit either way.
    """
    paulis = list(paulis)
    if not paulis:
        raise ValueError("empty cluster")
    n = paulis[0].n
    for i, p in enumerate(paulis):
        if p.n != n:
            raise ValueError("cluster Paulis differ in qubit count")
        if not p.is_hermitian:
            raise ValueError(f"cluster term {i} ({p}) is not Hermitian")
    for i in range(len(paulis)):
        for j in range(i + 1, len(paulis)):
            if not commutes(paulis[i], paulis[j]):
                raise NonCommutingClusterError(i, j, paulis[i], paulis[j])

    gens = sorted(_x_echelon(paulis))
    pivots = [c for c, _, _ in gens]
    pivot_mask = sum(1 << c for c in pivots)
    gates: list[Gate] = []
    for c, x, _ in gens:
        rest = x & ~pivot_mask
        while rest:
            j = _lowest_bit(rest)
            gates.append(CNOT(c, j))
            rest &= rest - 1

    # pivot Z block after the CNOTs; CNOT(c, j) does z_c ^= z_j on every row
    gx = np.array([_bits(x, n) for _, x, _ in gens], dtype=np.int64).reshape(-1, n)
    gz = np.array([_bits(z, n) for _, _, z in gens], dtype=np.int64).reshape(-1, n)
    conjugate_table(gx, gz, np.zeros(len(gens), dtype=np.int64), gates)
    for a, ca in enumerate(pivots):
        for cb in pivots[a + 1:]:
            if gz[a, cb]:
                gates.append(CZ(ca, cb))
        if gz[a, ca]:
            gates.append(Sdg(ca))
    gates.extend(H(c) for c in pivots)

    x = np.array([_bits(p.x, n) for p in paulis], dtype=np.int64)
    z = np.array([_bits(p.z, n) for p in paulis], dtype=np.int64)
    phase = np.array([p.phase for p in paulis], dtype=np.int64)
    conjugate_table(x, z, phase, gates)
    if x.any():
        raise AssertionError(f"terms {np.nonzero(x.any(axis=1))[0].tolist()} not diagonalized")

    # an already diagonal cluster keeps the empty Clifford
    if compress and gens:
        chain = _compress_chain(z)
        conjugate_table(x, z, phase, chain)
        gates.extend(chain)

    z_strings = tuple(
        (1 if ph == 0 else -1, tuple(np.flatnonzero(row).tolist())) for ph, row in zip(phase, z)
    )
    return DiagonalizedCluster(Circuit(n, tuple(gates)), z_strings)


def _bits(v: int, n: int) -> list[int]:
    return [(v >> j) & 1 for j in range(n)]


def _compress_chain(z: np.ndarray) -> list[Gate]:
    """Greedy CNOT network lowering the total Z weight of a diagonal cluster.

    On Z strings ``CNOT(c, t)`` does ``z_c ^= z_t``, changing the weight of
    each row with ``z_t = 1`` by -1 (``z_c = 1``) or +1.  A rotation ladder
    costs ``2 (w - 1)`` CNOTs and the gate itself costs 2 (it also appears
    in the inverse Clifford), so a CNOT is kept when it removes at least two
    units of weight.  Best pair first, lowest ``(c, t)`` on ties.
    """
    z = z.copy()
    gates: list[Gate] = []
    while True:
        both = z.T @ z
        gain = 2 * both - z.sum(axis=0)[None, :]
        np.fill_diagonal(gain, 0)
        c, t = np.unravel_index(np.argmax(gain), gain.shape)
        if gain[c, t] < 2:
            return gates
        z[:, c] ^= z[:, t]
        gates.append(CNOT(int(c), int(t)))


def rotation_ladder(n: int, support: Sequence[int], angle: float) -> list[Gate]:
    """``exp(-i angle/2 Z_support)`` as a linear CNOT chain onto the highest qubit."""
    support = sorted(support)
    if not support:
        raise ValueError("identity term: a pure global phase has no gate form")
    ladder = [CNOT(a, b) for a, b in zip(support, support[1:])]
    return ladder + [RZ(support[-1], angle)] + ladder[::-1]


def cluster_evolution_circuit(
    dc: DiagonalizedCluster, coeffs: Sequence[float], dt: float
) -> Circuit:
    """Exact circuit for ``exp(-i dt sum_i coeff_i P_i)`` over one cluster.

    Gate order is the diagonalizing Clifford, one Z rotation per term, then
    the inverse Clifford.  ``Rz(theta) = exp(-i theta Z / 2)``, so each term
    gets ``theta = 2 * sign * coeff * dt``.
    """
    if len(coeffs) != len(dc.z_strings):
        raise ValueError(f"{len(coeffs)} coefficients for {len(dc.z_strings)} cluster terms")
    n = dc.n_qubits
    body: list[Gate] = []
    for coeff, (sign, support) in zip(coeffs, dc.z_strings):
        body.extend(rotation_ladder(n, support, 2.0 * sign * coeff * dt))
    gates = dc.clifford.gates + tuple(body) + dc.clifford.inverse().gates
    return Circuit(n, gates)
