"""
Pauli strings and Clifford conjugation
======================================

Strings are stored as two bit masks plus a quarter phase.  Products keep
the phase exactly, and conjugating by a Clifford gate is a bit shuffle
plus a sign.
"""

import numpy as np

from sparsesyk import PauliString, commutes, conjugate_by_gate, multiply
from sparsesyk.circuit import CNOT, H, S
from sparsesyk.oracle import pauli_matrix

L = PauliString.from_label

# X times Z is -iY
print(multiply(L("XI"), L("ZI")))

# the same product as 4x4 matrices
lhs = pauli_matrix(multiply(L("XZ"), L("ZY")))
rhs = pauli_matrix(L("XZ")) @ pauli_matrix(L("ZY"))
print("matrix check:", np.allclose(lhs, rhs))

# two overlapping anticommuting sites cancel
print("XX, ZZ commute:", commutes(L("XX"), L("ZZ")))
print("X, Z commute:  ", commutes(L("X"), L("Z")))

# H swaps X and Z, S takes X to Y, CNOT spreads X from control to target
for p, g in [(L("X"), H(0)), (L("X"), S(0)), (L("XI"), CNOT(0, 1)), (L("IZ"), CNOT(0, 1))]:
    print(f"{g.kind}{g.qubits}: {p} -> {conjugate_by_gate(p, g)}")
