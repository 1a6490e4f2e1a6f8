"""
Gate counts per Trotter step
============================

Counts are disorder averages over ten instances of one first-order step.
Generic rotations are billed ceil(3 log2(1/eps_rot)) T gates each.
"""

import numpy as np

from sparsesyk import ResourceStats, compile_hamiltonian, p_from_k, sample_instance, step_resources

published = {6: 29, 8: 74, 10: 165, 12: 294, 14: 440, 16: 596, 18: 771, 20: 967}


def stats(N, **kw):
    s = ResourceStats()
    for seed in range(10):
        rep = step_resources(compile_hamiltonian(sample_instance(N, seed=seed, **kw)), order=1)
        s = s.merge(ResourceStats.from_report(rep))
    return s


print("  N   CNOT (se)      published  H+CNOT+T      T")
for N, ref in published.items():
    s = stats(N, k_target=8.7)
    print(f"{N:3d}  {s.mean('cnot'):7.1f} ({s.stderr('cnot'):4.1f})  {ref:6d}  "
          f"{s.mean('clifford_t'):9.1f}  {s.mean('t'):7.1f}")

# thinning the dense model lowers the cost
N = 12
print(f"\nN={N}, p from 1 down to {p_from_k(8.7, N):.3f}")
for p in np.geomspace(1.0, p_from_k(8.7, N), 5):
    print(f"  p={p:.3f}: {stats(N, p=float(p)).mean('cnot'):.0f} CNOT")

# growth with k at fixed N
ks = [2, 4, 8.7, 16, 32]
means = [stats(24, k_target=k).mean("cnot") for k in ks]
print("\nN=24 k-exponent:", round(float(np.polyfit(np.log(ks), np.log(means), 1)[0]), 3))
