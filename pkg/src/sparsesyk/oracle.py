"""Dense-matrix ground truth for small instances.

Everything here works on explicit ``2**n x 2**n`` complex matrices and is
meant for certification, not production simulation.  Qubit 0 is the most
significant (leftmost) tensor factor.
"""

from __future__ import annotations

from functools import reduce

import numpy as np

from .circuit import Circuit, Gate
from .pauli import PauliString

MAX_QUBITS = 14

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_SINGLE = {"I": _I2, "X": _X, "Y": _Y, "Z": _Z}

_FIXED_GATES = {
    "H": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    "S": np.diag([1, 1j]),
    "Sdg": np.diag([1, -1j]),
    "X": _X,
    "Z": _Z,
    "T": np.diag([1, np.exp(1j * np.pi / 4)]),
    "Tdg": np.diag([1, np.exp(-1j * np.pi / 4)]),
    "CNOT": np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
    ),
    "CZ": np.diag([1, 1, 1, -1]).astype(complex),
}


class SizeCapExceeded(ValueError):
    """Raised instead of silently building an oversized dense matrix."""


def _check_cap(n: int, cap: int = MAX_QUBITS):
    if n > cap:
        raise SizeCapExceeded(f"{n} qubits exceeds the dense-matrix cap of {cap}")


def pauli_matrix(p: PauliString) -> np.ndarray:
    """Kronecker product of single-qubit matrices, times ``i**phase``."""
    _check_cap(p.n)
    mats = [_SINGLE[ch] for ch in p.to_label(with_sign=False)]
    return (1j ** p.phase) * reduce(np.kron, mats)


def gate_matrix(g: Gate) -> np.ndarray:
    if g.kind == "RZ":
        half = g.angle / 2
        return np.diag([np.exp(-1j * half), np.exp(1j * half)])
    return _FIXED_GATES[g.kind]


def apply_gate(state: np.ndarray, g: Gate) -> np.ndarray:
    """Apply ``g`` to a batch of states shaped ``(2,)*n + (batch,)``."""
    k = len(g.qubits)
    m = gate_matrix(g).reshape((2,) * (2 * k))
    out = np.tensordot(m, state, axes=(list(range(k, 2 * k)), list(g.qubits)))
    return np.moveaxis(out, list(range(k)), list(g.qubits))


def circuit_unitary(c: Circuit, cap: int = MAX_QUBITS) -> np.ndarray:
    n = c.n_qubits
    _check_cap(n, cap)
    dim = 2**n
    state = np.eye(dim, dtype=complex).reshape((2,) * n + (dim,))
    for g in c.gates:
        state = apply_gate(state, g)
    return state.reshape(dim, dim)


def exact_unitary(h, t: float) -> np.ndarray:
    """``exp(-i h t)`` via Hermitian eigendecomposition.

    ``h`` is a dense Hermitian matrix or anything with a ``to_matrix()``
    method, such as a :class:`~sparsesyk.syk.PauliHamiltonian`.
    """
    if hasattr(h, "to_matrix"):
        h = h.to_matrix()
    evals, vecs = np.linalg.eigh(h)
    return (vecs * np.exp(-1j * t * evals)) @ vecs.conj().T


def spectral_norm(a: np.ndarray) -> float:
    """Largest singular value, from the Hermitian eigenproblem of ``a^dag a``."""
    if a.size == 0:
        return 0.0
    top = np.linalg.eigvalsh(a.conj().T @ a)[-1]
    return float(np.sqrt(max(top, 0.0)))


def hermitian_norm(a: np.ndarray) -> float:
    """Spectral norm of a normal matrix ``a`` that is Hermitian or anti-Hermitian."""
    herm = (a + a.conj().T) / 2
    anti = (a - a.conj().T) / 2
    if np.linalg.norm(herm) >= np.linalg.norm(anti):
        evals = np.linalg.eigvalsh(herm)
    else:
        evals = np.linalg.eigvalsh(1j * anti)
    return float(np.max(np.abs(evals))) if evals.size else 0.0


def operator_norm_diff(u: np.ndarray, v: np.ndarray, phase_insensitive: bool = False) -> float:
    """Spectral norm of ``u - v``.

    ``phase_insensitive`` first rotates ``v`` by the global phase that best
    aligns it with ``u``; it is a debugging aid, not used for certification.
    """
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    if phase_insensitive:
        overlap = np.vdot(v, u)
        if abs(overlap) > 0:
            v = v * (overlap / abs(overlap))
    return spectral_norm(u - v)


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def is_unitary(u: np.ndarray, atol: float = 1e-10) -> bool:
    return np.allclose(u.conj().T @ u, np.eye(u.shape[0]), atol=atol)
