"""
OpenQASM export
===============

Compiled circuits are written as OpenQASM 2.0 with full-precision angles
and read back gate for gate.  The command line front end does the same in
batch, e.g.::

    sparsesyk compile --N 8 --k 8.7 --seeds 0,1 --order 2 --out runs/demo
"""

from sparsesyk import TrotterPlan, compile_hamiltonian, emit_qasm, parse_qasm, sample_instance
from sparsesyk import transpile_clifford_t

compiled = compile_hamiltonian(sample_instance(8, k_target=8.7, seed=2))
circuit = compiled.circuit(TrotterPlan(order=2, t=0.5, r=2))
text = emit_qasm(circuit)
print("\n".join(text.splitlines()[:10]), "\n...")
print(f"{len(circuit)} gates, round trip exact: {parse_qasm(text) == circuit}")

_, report = transpile_clifford_t(circuit, eps_rot=0.0668)
print("CNOT", report.cnot_count, "| H+CNOT+T", report.clifford_plus_t_count, "| T", report.t_count)
