"""
Trotter circuits checked against the exact propagator
=====================================================

For small N the circuit unitary is compared with exp(-iHt), and the
measured error is sandwiched under the commutator bounds: the dense
version first, then its cheaper Pauli-by-Pauli relaxation.
"""

import numpy as np

from sparsesyk import certify, compile_hamiltonian, plan_steps, sample_instance
from sparsesyk.oracle import exact_unitary

compiled = compile_hamiltonian(sample_instance(8, k_target=8.7, seed=4))
h = compiled.h
print(f"n={h.n} qubits, {len(h)} terms, {len(compiled.clusters)} clusters")

Jt = 0.5
u = exact_unitary(h, Jt)
print(" order  r   measured   exact bound  pauli bound")
for order in (1, 2):
    for r in (1, 2, 4, 8):
        cert = certify(compiled, order, Jt, r, u_exact=u)
        print(f"  {order}   {r:2d}  {cert.measured:.3e}  {cert.exact_bound:.3e}  {cert.pauli_bound:.3e}"
              f"  {'ok' if cert.passed else 'VIOLATED'}")

# error falls like 1/r and 1/r^2
rs = np.array([1, 2, 4, 8, 16])
for order in (1, 2):
    errs = [certify(compiled, order, Jt, int(r), u_exact=u).measured for r in rs]
    print(f"order {order}: log-log slope {np.polyfit(np.log(rs), np.log(errs), 1)[0]:.2f}")

# the planned step count meets the target
r = plan_steps(2, Jt, 0.01)
print(f"planned r={r}: error {certify(compiled, 2, Jt, r, u_exact=u).measured:.2e} <= 0.01")
