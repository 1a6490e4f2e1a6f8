"""Sparse SYK disorder instances and their Jordan-Wigner Pauli Hamiltonians.

Random numbers
--------------
Each quadruple ``a < b < c < d`` has a lexicographic rank ``r`` (0-based).
Its randomness is the single Philox4x64-10 block at counter ``r`` under key
``seed``, i.e. four 64-bit words ``w0..w3``.  Words map to uniforms on
``[0, 1)`` as ``(w >> 11) * 2**-53``.  The term is kept when
``u(w0) <= p``; its coupling is ``sigma * sqrt(-2 ln(1 - u(w1))) *
cos(2 pi u(w2))`` (Box-Muller, cosine branch), with ``w3`` unused.  Every
quadruple consumes its block whether kept or not, so instances are a pure
function of ``(N, J, p, seed)`` and the dense (``p = 1``) and sparse streams
line up.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from .oracle import MAX_QUBITS, SizeCapExceeded
from .pauli import PauliString, multiply

__all__ = [
    "SykTerm",
    "SykInstance",
    "PauliHamiltonian",
    "p_from_k",
    "coupling_variance",
    "majorana_to_pauli",
    "sample_couplings",
    "sample_instance",
    "jordan_wigner",
    "hamiltonian_matrix",
]

_FULL_TABLE_LIMIT = 1 << 21


@dataclass(frozen=True)
class SykTerm:
    a: int
    b: int
    c: int
    d: int
    J: float

    def __post_init__(self):
        if not (1 <= self.a < self.b < self.c < self.d):
            raise ValueError(f"indices must satisfy 1 <= a<b<c<d, got {self.indices}")

    @property
    def indices(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)


@dataclass(frozen=True)
class SykInstance:
    N: int
    J: float
    p: float
    seed: int
    terms: tuple[SykTerm, ...] = ()
    k_target: float | None = None

    def __post_init__(self):
        _validate(self.N, self.J, self.p)
        terms = tuple(self.terms)
        seen = set()
        for t in terms:
            if t.d > self.N:
                raise ValueError(f"term {t.indices} exceeds N={self.N}")
            if t.indices in seen:
                raise ValueError(f"duplicate quadruple {t.indices}")
            seen.add(t.indices)
        object.__setattr__(self, "terms", terms)

    @property
    def n_qubits(self) -> int:
        return self.N // 2

    @property
    def degree(self) -> float:
        """Realized hypergraph degree: kept terms per Majorana."""
        return len(self.terms) / self.N

    def to_json(self) -> str:
        doc = {
            "N": self.N,
            "J": self.J,
            "p": self.p,
            "k_target": self.k_target,
            "seed": self.seed,
            "terms": [
                {"a": t.a, "b": t.b, "c": t.c, "d": t.d, "J": t.J} for t in self.terms
            ],
        }
        return json.dumps(doc, indent=1) + "\n"

    @classmethod
    def from_json(cls, text: str) -> SykInstance:
        doc = json.loads(text)
        terms = tuple(SykTerm(t["a"], t["b"], t["c"], t["d"], float(t["J"])) for t in doc["terms"])
        return cls(
            int(doc["N"]), float(doc["J"]), float(doc["p"]), int(doc["seed"]),
            terms, doc.get("k_target"),
        )

    def save(self, path) -> None:
        Path(path).write_text(self.to_json())

    @classmethod
    def load(cls, path) -> SykInstance:
        return cls.from_json(Path(path).read_text())


def _validate(N, J, p):
    if N < 4 or N % 2:
        raise ValueError(f"N must be an even integer >= 4, got {N}")
    if not J > 0:
        raise ValueError(f"J must be positive, got {J}")
    if not 0 < p <= 1:
        raise ValueError(f"p must lie in (0, 1], got {p}")


def p_from_k(k: float, N: int) -> float:
    """Retention probability for average hypergraph degree ``k`` (large-N form)."""
    if not k > 0:
        raise ValueError(f"k must be positive, got {k}")
    return min(1.0, 24.0 * k / N**3)


def coupling_variance(N: int, J: float = 1.0, p: float = 1.0) -> float:
    return 6.0 * J**2 / (p * N**3)


# --------------------------------------------------------------------------
# Sampling

@lru_cache(maxsize=8)
def _triples(n: int) -> np.ndarray:
    """All 3-subsets of ``range(n)`` in lexicographic order, shape (C(n,3), 3)."""
    i, j = np.triu_indices(n, k=1)
    pairs = np.stack([i, j], axis=1)
    blocks = []
    for first in range(n - 2):
        # pairs are lexicographic too, so those with i > first form a tail
        tail = pairs[math.comb(n, 2) - math.comb(n - 1 - first, 2):]
        blocks.append(np.column_stack([np.full(len(tail), first), tail]))
    return np.concatenate(blocks).astype(np.int64) if blocks else np.zeros((0, 3), np.int64)


@lru_cache(maxsize=4)
def _quadruples(n: int) -> np.ndarray:
    return np.concatenate(list(_quadruple_blocks(n))) if n >= 4 else np.zeros((0, 4), np.int64)


def _quadruple_blocks(n: int):
    trip = _triples(n)
    total = len(trip)
    for first in range(n - 3):
        tail = trip[total - math.comb(n - 1 - first, 3):]
        yield np.column_stack([np.full(len(tail), first), tail])


def _quadruple_chunks(n: int):
    """Yield ``(start_rank, quads)`` covering all 0-based quadruples in order."""
    if math.comb(n, 4) <= _FULL_TABLE_LIMIT:
        yield 0, _quadruples(n)
        return
    start = 0
    for block in _quadruple_blocks(n):
        yield start, block
        start += len(block)


def _unit_uniform(words: np.ndarray) -> np.ndarray:
    return (words >> np.uint64(11)).astype(np.float64) * 2.0**-53


def _check_seed(seed) -> int:
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must be a non-negative 64-bit integer, got {seed}")
    return seed


def _resolve_p(N, p, k_target):
    if (p is None) == (k_target is None):
        raise ValueError("give exactly one of p and k_target")
    return p_from_k(k_target, N) if k_target is not None else p


def sample_couplings(
    N: int,
    J: float = 1.0,
    p: float | None = None,
    *,
    k_target: float | None = None,
    seed: int = 0,
) -> tuple[np.ndarray, np.ndarray]:
    """Array form of :func:`sample_instance`.

    Returns the kept quadruples as a 1-based ``(m, 4)`` integer array in
    lexicographic order and their couplings as a length-``m`` float array.
    """
    p = _resolve_p(N, p, k_target)
    _validate(N, J, p)
    seed = _check_seed(seed)
    sigma = math.sqrt(coupling_variance(N, J, p))

    kept_quads, kept_couplings = [], []
    for start, quads in _quadruple_chunks(N):
        gen = np.random.Philox(key=seed, counter=[start, 0, 0, 0])
        words = gen.random_raw(4 * len(quads)).reshape(-1, 4)
        keep = _unit_uniform(words[:, 0]) <= p
        u1 = _unit_uniform(words[keep, 1])
        u2 = _unit_uniform(words[keep, 2])
        gauss = np.sqrt(-2.0 * np.log1p(-u1)) * np.cos(2.0 * np.pi * u2)
        kept_quads.append(quads[keep] + 1)
        kept_couplings.append(sigma * gauss)
    return np.concatenate(kept_quads), np.concatenate(kept_couplings)


def sample_instance(
    N: int,
    J: float = 1.0,
    p: float | None = None,
    *,
    k_target: float | None = None,
    seed: int = 0,
) -> SykInstance:
    """Draw one sparse SYK disorder realization.

    Exactly one of ``p`` and ``k_target`` must be given; ``k_target`` is
    converted with :func:`p_from_k`.  Couplings have mean zero and variance
    ``6 J**2 / (p N**3)``.
    """
    p = _resolve_p(N, p, k_target)
    quads, couplings = sample_couplings(N, J, p, seed=seed)
    terms = tuple(
        SykTerm(a, b, c, d, j) for (a, b, c, d), j in zip(quads.tolist(), couplings.tolist())
    )
    return SykInstance(N, float(J), float(p), int(seed), terms, k_target)


# --------------------------------------------------------------------------
# Jordan-Wigner

def majorana_to_pauli(i: int, N: int) -> PauliString:
    """Jordan-Wigner image of Majorana ``i`` (1-based) among ``N``.

    ``chi_{2r-1} = Z...Z X_r`` and ``chi_{2r} = Z...Z Y_r`` with the Z chain
    on qubits ``1..r-1``.
    """
    if N < 2 or N % 2:
        raise ValueError(f"N must be a positive even integer, got {N}")
    if not 1 <= i <= N:
        raise IndexError(f"Majorana index {i} outside 1..{N}")
    q = (i + 1) // 2 - 1
    chain = (1 << q) - 1
    bit = 1 << q
    if i % 2:
        return PauliString(N // 2, x=bit, z=chain)
    return PauliString(N // 2, x=bit, z=chain | bit)


@dataclass(frozen=True)
class PauliHamiltonian:
    """``sum_j coeff_j * op_j`` with real coefficients and phase-0 strings."""

    n: int
    terms: tuple[tuple[float, PauliString], ...] = ()
    _table: tuple = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        terms = tuple((float(c), op) for c, op in self.terms)
        for c, op in terms:
            if op.n != self.n:
                raise ValueError(f"term {op} is not on {self.n} qubits")
            if op.phase != 0:
                raise ValueError(f"term {op} must have phase 0; fold signs into the coefficient")
        object.__setattr__(self, "terms", terms)

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def coeffs(self) -> np.ndarray:
        return np.array([c for c, _ in self.terms], dtype=float)

    @property
    def ops(self) -> list[PauliString]:
        return [op for _, op in self.terms]

    def symplectic(self) -> tuple[np.ndarray, np.ndarray]:
        """Bit matrices ``(x, z)`` of shape ``(m, n)``, rows in term order."""
        if self._table is None:
            x = np.zeros((len(self.terms), self.n), dtype=np.uint8)
            z = np.zeros_like(x)
            for row, (_, op) in enumerate(self.terms):
                xb, zb = op.bits()
                x[row], z[row] = xb, zb
            object.__setattr__(self, "_table", (x, z))
        return self._table

    def subset(self, indices) -> PauliHamiltonian:
        return PauliHamiltonian(self.n, tuple(self.terms[i] for i in indices))

    def to_matrix(self, cap: int = MAX_QUBITS) -> np.ndarray:
        return hamiltonian_matrix(self, cap)


def jordan_wigner(inst: SykInstance) -> PauliHamiltonian:
    """Map every kept quartic term ``J_abcd chi_a chi_b chi_c chi_d`` to a Pauli term.

    Terms are stored once per ordered quadruple, so the coefficient is
    ``J_abcd`` itself times the real sign of the Majorana product.
    """
    chis = [None] + [majorana_to_pauli(i, inst.N) for i in range(1, inst.N + 1)]
    out = []
    for t in inst.terms:
        prod = multiply(multiply(chis[t.a], chis[t.b]), multiply(chis[t.c], chis[t.d]))
        # a product of four distinct anticommuting Hermitian Majoranas is Hermitian
        assert prod.is_hermitian, prod
        out.append((t.J * prod.sign, prod.unsigned()))
    return PauliHamiltonian(inst.n_qubits, tuple(out))


def _reverse_bits(v: int, n: int) -> int:
    return int(format(v, f"0{n}b")[::-1], 2) if n else 0


def hamiltonian_matrix(h: PauliHamiltonian, cap: int = MAX_QUBITS) -> np.ndarray:
    """Dense ``2**n x 2**n`` matrix of ``h``; refuses sizes above ``cap`` qubits."""
    if h.n > cap:
        raise SizeCapExceeded(f"{h.n} qubits exceeds the dense-matrix cap of {cap}")
    dim = 1 << h.n
    basis = np.arange(dim, dtype=np.int64)
    mat = np.zeros((dim, dim), dtype=complex)
    for coeff, op in h.terms:
        # qubit j is bit n-1-j of the basis index
        xm = _reverse_bits(op.x, h.n)
        zm = _reverse_bits(op.z, h.n)
        y_count = bin(op.x & op.z).count("1")
        signs = 1 - 2 * (np.bitwise_count(basis & zm).astype(np.int64) & 1)
        mat[basis ^ xm, basis] += coeff * (1j ** ((op.phase + y_count) % 4)) * signs
    return mat
