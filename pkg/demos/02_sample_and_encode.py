"""
Sparse SYK instances and the Jordan-Wigner map
==============================================

Each of the C(N, 4) quartic terms survives with probability p, and kept
couplings get variance 6 J^2 / (p N^3).  Choosing a mean hypergraph degree k
fixes p = 24 k / N^3.
"""

import numpy as np

from sparsesyk import jordan_wigner, majorana_to_pauli, p_from_k, sample_instance
from sparsesyk.oracle import pauli_matrix

N = 12
print(f"N={N}, k=8.7 -> p={p_from_k(8.7, N):.4f}")

inst = sample_instance(N, k_target=8.7, seed=3)
print(f"{len(inst.terms)} kept terms (about {p_from_k(8.7, N) * 495:.0f} expected)")
print("first terms:", [(t.indices, round(t.J, 4)) for t in inst.terms[:3]])

# Majoranas become Z strings ending in X or Y
for i in (1, 2, 5, 6):
    print(f"chi_{i} ->", majorana_to_pauli(i, N).to_label(with_sign=False))

# and they anticommute exactly as matrices
chis = [pauli_matrix(majorana_to_pauli(i, 8)) for i in range(1, 9)]
ok = all(
    np.array_equal(a @ b + b @ a, 2 * np.eye(16) if ia == ib else np.zeros((16, 16)))
    for ia, a in enumerate(chis)
    for ib, b in enumerate(chis)
)
print("{chi_a, chi_b} = 2 delta_ab:", ok)

# every quartic term maps to one real-weighted Pauli string
h = jordan_wigner(inst)
for coeff, op in h.terms[:4]:
    print(f"{coeff:+.4f} * {op.to_label(with_sign=False)}")

# instances are plain JSON and fully determined by (N, J, p, seed)
assert sample_instance(N, k_target=8.7, seed=3).to_json() == inst.to_json()
