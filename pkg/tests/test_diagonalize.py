import itertools

import numpy as np
import pytest

from sparsesyk import (
    PauliString,
    cluster_evolution_circuit,
    diagonalize_cluster,
    jordan_wigner,
    partition_commuting,
    sample_instance,
)
from sparsesyk.circuit import CNOT, RZ, Circuit, H
from sparsesyk.diagonalize import NonCommutingClusterError, conjugate_by_circuit
from sparsesyk.oracle import circuit_unitary, exact_unitary, pauli_matrix
from sparsesyk.pauli import commutes

L = PauliString.from_label


def random_commuting_set(rng, n, size):
    """Random commuting Hermitian strings, built by rejection."""
    out = []
    while len(out) < size:
        p = PauliString(n, int(rng.integers(0, 2**n)), int(rng.integers(0, 2**n)))
        if p.x | p.z and p not in out and all(commutes(p, q) for q in out):
            out.append(p)
        if len(out) < size and rng.random() < 0.02:
            break
    return out


def test_already_diagonal_is_empty():
    dc = diagonalize_cluster([L("ZII"), L("IZZ")])
    assert dc.clifford.gates == ()
    assert dc.z_strings == ((1, (0,)), (1, (1, 2)))


def test_single_x_gets_one_hadamard():
    dc = diagonalize_cluster([L("XI")])
    assert dc.clifford.gates == (H(0),)
    assert dc.z_strings == ((1, (0,)),)


def test_rejects_anticommuting_pair():
    with pytest.raises(NonCommutingClusterError) as err:
        diagonalize_cluster([L("ZI"), L("IX"), L("XI")])
    assert err.value.pair == (0, 2)


def test_rejects_non_hermitian():
    with pytest.raises(ValueError):
        diagonalize_cluster([L("+iZ")])


@pytest.mark.parametrize("compress", [True, False])
def test_random_clusters_matrix_diagonal(rng, compress):
    for _ in range(60):
        n = int(rng.integers(1, 7))
        paulis = random_commuting_set(rng, n, int(rng.integers(1, 9)))
        signs = [int(rng.choice([0, 2])) for _ in paulis]
        paulis = [PauliString(p.n, p.x, p.z, s) for p, s in zip(paulis, signs)]
        dc = diagonalize_cluster(paulis, compress=compress)
        c = circuit_unitary(dc.clifford)
        coeffs = rng.normal(size=len(paulis))
        hc = sum(a * pauli_matrix(p) for a, p in zip(coeffs, paulis))
        rotated = c @ hc @ c.conj().T
        assert np.linalg.norm(rotated - np.diag(np.diag(rotated)), 2) < 1e-10
        for p, (sign, support) in zip(paulis, dc.z_strings):
            img = conjugate_by_circuit(p, dc.clifford)
            assert img.x == 0 and img.sign == sign and img.support == support


def test_sign_images_match_matrices(rng):
    h = jordan_wigner(sample_instance(10, k_target=8.7, seed=3))
    for cl in partition_commuting(h):
        ops = [h.ops[i] for i in cl]
        dc = diagonalize_cluster(ops)
        c = circuit_unitary(dc.clifford)
        for p, (sign, support) in zip(ops, dc.z_strings):
            z = PauliString(p.n, 0, sum(1 << q for q in support))
            assert np.allclose(c @ pauli_matrix(p) @ c.conj().T, sign * pauli_matrix(z))


def test_conjugation_audit_large():
    h = jordan_wigner(sample_instance(40, k_target=8.7, seed=1))
    for cl in partition_commuting(h):
        ops = [h.ops[i] for i in cl]
        dc = diagonalize_cluster(ops)
        assert {g.kind for g in dc.clifford.gates} <= {"H", "S", "Sdg", "CNOT", "CZ"}
        for p, (sign, support) in zip(ops, dc.z_strings):
            img = conjugate_by_circuit(p, dc.clifford)
            assert img.x == 0 and img.sign == sign and img.support == support


def test_single_z_rotation():
    dc = diagonalize_cluster([L("Z")])
    circ = cluster_evolution_circuit(dc, [0.3], 0.5)
    assert circ.gates == (RZ(0, 0.3),)
    assert np.allclose(circuit_unitary(circ), exact_unitary(0.3 * pauli_matrix(L("Z")), 0.5))


def test_zz_rotation():
    dc = diagonalize_cluster([L("ZZ")])
    circ = cluster_evolution_circuit(dc, [0.2], 1.5)
    assert circ.gates == (CNOT(0, 1), RZ(1, 0.6000000000000001), CNOT(0, 1))


def test_negative_sign_flips_angle():
    dc = diagonalize_cluster([L("-Z")])
    circ = cluster_evolution_circuit(dc, [0.3], 1.0)
    assert circ.gates[0].angle == pytest.approx(-0.6)


def test_evolution_matches_exponential(rng):
    for N, seed in itertools.product([6, 8, 10, 12], range(3)):
        h = jordan_wigner(sample_instance(N, k_target=8.7, seed=seed))
        for cl in partition_commuting(h):
            sub = h.subset(cl)
            dc = diagonalize_cluster(sub.ops)
            dt = float(rng.uniform(0.1, 2.0))
            u = circuit_unitary(cluster_evolution_circuit(dc, sub.coeffs, dt))
            assert np.linalg.norm(u - exact_unitary(sub, dt), 2) < 1e-10


def test_misaligned_coeffs():
    dc = diagonalize_cluster([L("Z")])
    with pytest.raises(ValueError):
        cluster_evolution_circuit(dc, [1.0, 2.0], 0.1)


def test_compression_never_costs_more():
    from sparsesyk import count_gates

    for seed in range(5):
        h = jordan_wigner(sample_instance(20, k_target=8.7, seed=seed))
        for cl in partition_commuting(h):
            sub = h.subset(cl)
            costs = [
                count_gates(cluster_evolution_circuit(
                    diagonalize_cluster(sub.ops, compress=flag), sub.coeffs, 0.1)).cnot_count
                for flag in (False, True)
            ]
            assert costs[1] <= costs[0]
