"""Pauli strings in symplectic form with exact phase tracking.

A :class:`PauliString` on ``n`` qubits is stored as two packed bit masks
``x`` and ``z`` (bit ``j`` is qubit ``j``) and a phase exponent ``k`` so that
the operator is ``i**k * sigma_0 (x) sigma_1 (x) ... (x) sigma_{n-1}`` with
``sigma(x=1, z=1) = Y``.  Qubit 0 is the leftmost Kronecker factor.

With this convention a string is Hermitian exactly when ``k`` is even, and
``k in {0, 2}`` is the real sign ``+1``/``-1``.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = [
    "PauliString",
    "CLIFFORD_GATES",
    "multiply",
    "commutes",
    "conjugate_by_gate",
    "conjugate_table",
    "weight",
]

CLIFFORD_GATES = frozenset({"H", "S", "Sdg", "CNOT", "CZ", "X", "Z"})

_SIGN_PREFIX = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_PREFIX_PHASE = {"+i": 1, "-i": 3, "+": 0, "-": 2, "": 0}


def _popcount(v: int) -> int:
    return bin(v).count("1")


@dataclass(frozen=True)
class PauliString:
    n: int
    x: int = 0
    z: int = 0
    phase: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"qubit count must be positive, got {self.n}")
        limit = 1 << self.n
        if not (0 <= self.x < limit and 0 <= self.z < limit):
            raise ValueError("x/z masks do not fit in n qubits")
        object.__setattr__(self, "phase", self.phase % 4)

    @classmethod
    def identity(cls, n: int) -> PauliString:
        return cls(n)

    @classmethod
    def from_label(cls, label: str) -> PauliString:
        """Parse labels such as ``"ZZXII"``, ``"-XY"`` or ``"+iZ"``."""
        label = label.strip()
        for prefix in ("+i", "-i", "+", "-"):
            if label.startswith(prefix):
                body, phase = label[len(prefix):], _PREFIX_PHASE[prefix]
                break
        else:
            body, phase = label, 0
        if not body:
            raise ValueError("empty Pauli label")
        x = z = 0
        for j, ch in enumerate(body.upper()):
            if ch in "XY":
                x |= 1 << j
            if ch in "ZY":
                z |= 1 << j
            if ch not in "IXYZ":
                raise ValueError(f"bad Pauli character {ch!r} in {label!r}")
        return cls(len(body), x, z, phase)

    @classmethod
    def single(cls, n: int, qubit: int, kind: str) -> PauliString:
        if not 0 <= qubit < n:
            raise IndexError(f"qubit {qubit} out of range for n={n}")
        bit = 1 << qubit
        x = bit if kind in "XY" else 0
        z = bit if kind in "ZY" else 0
        return cls(n, x, z)

    def to_label(self, with_sign: bool = True) -> str:
        chars = []
        for j in range(self.n):
            xb = (self.x >> j) & 1
            zb = (self.z >> j) & 1
            chars.append("IXZY"[xb | (zb << 1)])
        body = "".join(chars)
        return _SIGN_PREFIX[self.phase] + body if with_sign else body

    def __str__(self) -> str:
        return self.to_label()

    def __mul__(self, other: PauliString) -> PauliString:
        return multiply(self, other)

    def __neg__(self) -> PauliString:
        return PauliString(self.n, self.x, self.z, self.phase + 2)

    @property
    def support(self) -> tuple[int, ...]:
        mask = self.x | self.z
        return tuple(j for j in range(self.n) if (mask >> j) & 1)

    @property
    def is_hermitian(self) -> bool:
        return self.phase % 2 == 0

    @property
    def is_diagonal(self) -> bool:
        return self.x == 0

    @property
    def sign(self) -> int:
        """Real sign of a Hermitian string."""
        if not self.is_hermitian:
            raise ValueError(f"{self} is not Hermitian")
        return 1 if self.phase == 0 else -1

    def unsigned(self) -> PauliString:
        return PauliString(self.n, self.x, self.z, 0)

    def inverse(self) -> PauliString:
        # P^2 = i^(2k) I, so P^-1 = i^(-2k) P
        return PauliString(self.n, self.x, self.z, -self.phase)

    def bits(self) -> tuple[list[int], list[int]]:
        """Unpacked ``(x, z)`` bit lists indexed by qubit."""
        return (
            [(self.x >> j) & 1 for j in range(self.n)],
            [(self.z >> j) & 1 for j in range(self.n)],
        )


def _check_sizes(p: PauliString, q: PauliString):
    if p.n != q.n:
        raise ValueError(f"qubit count mismatch: {p.n} vs {q.n}")


def multiply(p: PauliString, q: PauliString) -> PauliString:
    """Return the operator product ``p @ q`` with the exact phase."""
    _check_sizes(p, q)
    # rewrite both as i^a X^x Z^z (Y = i X Z), where the product only picks
    # up (-1)^(z_p . x_q) from moving Z's of p past X's of q
    a = p.phase + _popcount(p.x & p.z)
    b = q.phase + _popcount(q.x & q.z)
    x = p.x ^ q.x
    z = p.z ^ q.z
    k = a + b + 2 * _popcount(p.z & q.x) - _popcount(x & z)
    return PauliString(p.n, x, z, k)


def commutes(p: PauliString, q: PauliString) -> bool:
    _check_sizes(p, q)
    return _popcount((p.x & q.z) ^ (p.z & q.x)) % 2 == 0


def weight(p: PauliString) -> int:
    return _popcount(p.x | p.z)


def conjugate_by_gate(p: PauliString, gate, qubits=None) -> PauliString:
    """Return ``g p g^dagger`` for a Clifford gate ``g``.

    ``gate`` is either a gate kind string (with ``qubits`` given separately)
    or any object exposing ``kind`` and ``qubits`` attributes, such as
    :class:`sparsesyk.circuit.Gate`.
    """
    if qubits is None:
        kind, qubits = gate.kind, gate.qubits
    else:
        kind = gate
    if kind not in CLIFFORD_GATES:
        raise ValueError(f"unsupported Clifford gate {kind!r}")
    for q in qubits:
        if not 0 <= q < p.n:
            raise IndexError(f"qubit {q} out of range for n={p.n}")

    x, z, flip = p.x, p.z, 0
    if kind in ("CNOT", "CZ"):
        a, b = qubits
        if a == b:
            raise ValueError(f"{kind} needs two distinct qubits")
        xa, za = (x >> a) & 1, (z >> a) & 1
        xb, zb = (x >> b) & 1, (z >> b) & 1
        if kind == "CNOT":
            flip = xa & zb & (xb ^ za ^ 1)
            x ^= xa << b
            z ^= zb << a
        else:
            flip = xa & xb & (za ^ zb)
            z ^= (xb << a) | (xa << b)
    else:
        (a,) = qubits
        xa, za = (x >> a) & 1, (z >> a) & 1
        bit = 1 << a
        if kind == "H":
            flip = xa & za
            x = (x & ~bit) | (za << a)
            z = (z & ~bit) | (xa << a)
        elif kind == "S":
            flip = xa & za
            z ^= xa << a
        elif kind == "Sdg":
            flip = xa & (za ^ 1)
            z ^= xa << a
        elif kind == "X":
            flip = za
        elif kind == "Z":
            flip = xa
    return PauliString(p.n, x, z, p.phase + 2 * flip)


def conjugate_table(x, z, phase, gates):
    """Vectorized :func:`conjugate_by_gate` over many strings at once.

    ``x`` and ``z`` are ``(m, n)`` 0/1 integer arrays (column ``j`` is qubit
    ``j``) and ``phase`` an ``(m,)`` array; all three are updated in place
    and returned.  Same sign rules as the scalar path.
    """
    for g in gates:
        kind, qs = g.kind, g.qubits
        if kind not in CLIFFORD_GATES:
            raise ValueError(f"unsupported Clifford gate {kind!r}")
        if kind in ("CNOT", "CZ"):
            a, b = qs
            xa, za, xb, zb = x[:, a].copy(), z[:, a].copy(), x[:, b].copy(), z[:, b].copy()
            if kind == "CNOT":
                flip = xa & zb & (xb ^ za ^ 1)
                x[:, b] = xb ^ xa
                z[:, a] = za ^ zb
            else:
                flip = xa & xb & (za ^ zb)
                z[:, a] = za ^ xb
                z[:, b] = zb ^ xa
        else:
            (a,) = qs
            xa, za = x[:, a].copy(), z[:, a].copy()
            if kind == "H":
                flip = xa & za
                x[:, a], z[:, a] = za, xa
            elif kind == "S":
                flip = xa & za
                z[:, a] = za ^ xa
            elif kind == "Sdg":
                flip = xa & (za ^ 1)
                z[:, a] = za ^ xa
            elif kind == "X":
                flip = za
            else:
                flip = xa
        phase += 2 * flip
        phase %= 4
    return x, z, phase
