"""
Commuting clusters and their diagonalizing circuits
===================================================

Terms are grouped by greedily coloring the anticommutation graph.  Every
group is then rotated onto Z strings by one Clifford circuit, after which
its evolution is a row of CNOT ladders and Rz gates.
"""

import numpy as np

from sparsesyk import (
    build_commutation_graph,
    cluster_evolution_circuit,
    count_gates,
    diagonalize_cluster,
    jordan_wigner,
    partition_commuting,
    sample_instance,
)
from sparsesyk.oracle import circuit_unitary, exact_unitary, pauli_matrix

h = jordan_wigner(sample_instance(10, k_target=8.7, seed=1))
graph = build_commutation_graph(h)
clusters = partition_commuting(h)
print(f"{len(h)} terms, max anticommutation degree {graph.max_degree}, {len(clusters)} clusters")
print("cluster sizes:", [len(c) for c in clusters])

# take the largest cluster apart
big = max(clusters, key=len)
sub = h.subset(big)
dc = diagonalize_cluster(sub.ops)
print("Clifford gates:", count_gates(dc.clifford).counts)
for op, (sign, support) in list(zip(sub.ops, dc.z_strings))[:4]:
    print(f"  {op.to_label(with_sign=False)} -> {'+' if sign > 0 else '-'}Z{list(support)}")

# the rotated cluster Hamiltonian is diagonal
c = circuit_unitary(dc.clifford)
rotated = c @ sub.to_matrix() @ c.conj().T
print("off-diagonal norm:", np.linalg.norm(rotated - np.diag(np.diag(rotated))))

# and the evolution circuit is exact
dt = 0.3
u = circuit_unitary(cluster_evolution_circuit(dc, sub.coeffs, dt))
print("evolution error:", np.linalg.norm(u - exact_unitary(sub, dt), 2))

# optional CNOT compression shortens the shared parity chains
for compress in (False, True):
    d = diagonalize_cluster(sub.ops, compress=compress)
    cnots = count_gates(cluster_evolution_circuit(d, sub.coeffs, dt)).cnot_count
    print(f"compress={compress}: {cnots} CNOT")
