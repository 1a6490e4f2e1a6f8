"""Gate-level circuit IR, OpenQASM 2.0 round trip and resource accounting."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterable

__all__ = [
    "Gate",
    "Circuit",
    "ResourceReport",
    "ResourceStats",
    "emit_qasm",
    "parse_qasm",
    "count_gates",
    "t_per_rotation",
    "transpile_clifford_t",
    "DEFAULT_EPS_ROT",
    "CSV_COLUMNS",
]

ONE_QUBIT = ("H", "S", "Sdg", "X", "Z", "T", "Tdg", "RZ")
TWO_QUBIT = ("CNOT", "CZ")
GATE_KINDS = ONE_QUBIT + TWO_QUBIT

# ceil(3 log2(1/0.0668)) = 12 T gates per generic rotation, close to the
# ~11.7 T per term published for large k=8.7 instances
DEFAULT_EPS_ROT = 0.0668

_QASM_NAMES = {
    "H": "h", "S": "s", "Sdg": "sdg", "X": "x", "Z": "z",
    "T": "t", "Tdg": "tdg", "RZ": "rz", "CNOT": "cx", "CZ": "cz",
}
_QASM_KINDS = {v: k for k, v in _QASM_NAMES.items()}


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]
    angle: float | None = None
    # T-gate charge of a generic rotation after transpile_clifford_t
    t_charge: int | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        qubits = tuple(int(q) for q in self.qubits)
        object.__setattr__(self, "qubits", qubits)
        arity = 2 if self.kind in TWO_QUBIT else 1
        if len(qubits) != arity:
            raise ValueError(f"{self.kind} takes {arity} qubit(s), got {qubits}")
        if arity == 2 and qubits[0] == qubits[1]:
            raise ValueError(f"{self.kind} needs distinct qubits, got {qubits}")
        if self.kind == "RZ":
            if self.angle is None or not math.isfinite(self.angle):
                raise ValueError("RZ needs a finite angle")
            object.__setattr__(self, "angle", float(self.angle))
        elif self.angle is not None:
            raise ValueError(f"{self.kind} takes no angle")

    def inverse(self) -> Gate:
        if self.kind == "RZ":
            return Gate("RZ", self.qubits, -self.angle)
        swap = {"S": "Sdg", "Sdg": "S", "T": "Tdg", "Tdg": "T"}
        return Gate(swap.get(self.kind, self.kind), self.qubits)


# convenience constructors
def H(q): return Gate("H", (q,))
def S(q): return Gate("S", (q,))
def Sdg(q): return Gate("Sdg", (q,))
def CNOT(c, t): return Gate("CNOT", (c, t))
def CZ(a, b): return Gate("CZ", (a, b))
def RZ(q, angle): return Gate("RZ", (q,), angle)


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("a circuit needs at least one qubit")
        gates = tuple(self.gates)
        for g in gates:
            for q in g.qubits:
                if not 0 <= q < self.n_qubits:
                    raise IndexError(f"{g} acts outside {self.n_qubits} qubits")
        object.__setattr__(self, "gates", gates)

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def then(self, other: Circuit) -> Circuit:
        """Sequential composition: ``self`` first, then ``other``."""
        if other.n_qubits != self.n_qubits:
            raise ValueError("cannot compose circuits of different width")
        return Circuit(self.n_qubits, self.gates + other.gates)

    def inverse(self) -> Circuit:
        return Circuit(self.n_qubits, tuple(g.inverse() for g in reversed(self.gates)))

    @classmethod
    def concat(cls, n_qubits: int, parts: Iterable[Circuit]) -> Circuit:
        gates: list[Gate] = []
        for part in parts:
            if part.n_qubits != n_qubits:
                raise ValueError("cannot compose circuits of different width")
            gates.extend(part.gates)
        return cls(n_qubits, tuple(gates))


# --------------------------------------------------------------------------
# OpenQASM 2.0

def emit_qasm(c: Circuit) -> str:
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{c.n_qubits}];"]
    for g in c.gates:
        name = _QASM_NAMES[g.kind]
        args = ",".join(f"q[{q}]" for q in g.qubits)
        if g.kind == "RZ":
            lines.append(f"{name}({g.angle:.17g}) {args};")
        else:
            lines.append(f"{name} {args};")
    return "\n".join(lines) + "\n"


_GATE_LINE = re.compile(
    r"^(?P<name>[a-z]+)(?:\((?P<angle>[^)]*)\))?\s+(?P<args>q\[\d+\](?:\s*,\s*q\[\d+\])*)$"
)


def parse_qasm(text: str) -> Circuit:
    """Parse the OpenQASM 2.0 subset written by :func:`emit_qasm`."""
    n_qubits = None
    gates = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("//", 1)[0].strip()
        if not line:
            continue
        if not line.endswith(";"):
            raise ValueError(f"line {lineno}: missing ';'")
        stmt = line[:-1].strip()
        if stmt == "OPENQASM 2.0" or stmt.startswith("include"):
            continue
        m = re.fullmatch(r"qreg\s+q\[(\d+)\]", stmt)
        if m:
            if n_qubits is not None:
                raise ValueError(f"line {lineno}: only one register supported")
            n_qubits = int(m.group(1))
            continue
        m = _GATE_LINE.match(stmt)
        if not m or m.group("name") not in _QASM_KINDS:
            raise ValueError(f"line {lineno}: unsupported statement {stmt!r}")
        kind = _QASM_KINDS[m.group("name")]
        qubits = tuple(int(v) for v in re.findall(r"q\[(\d+)\]", m.group("args")))
        angle = float(m.group("angle")) if m.group("angle") is not None else None
        gates.append(Gate(kind, qubits, angle))
    if n_qubits is None:
        raise ValueError("no qreg declaration found")
    return Circuit(n_qubits, tuple(gates))


# --------------------------------------------------------------------------
# Resource accounting

@dataclass(frozen=True)
class ResourceReport:
    """Gate tallies for one circuit.

    ``counts`` maps gate kind to number of occurrences.  After
    :func:`transpile_clifford_t`, ``exact_rewrites`` holds the number of
    Clifford gates (S, Sdg, Z) produced by rewriting rotations whose angle is
    a multiple of pi/4, and ``charged_rotations`` the rotations billed
    ``t_per_rot`` T gates each.

    Aggregates: a CZ is billed as one CNOT plus two H.  ``clifford_plus_t``
    is H + CNOT + T + exact rewrites; S gates coming from basis changes are
    not included.
    """

    counts: dict
    exact_rewrites: int = 0
    charged_rotations: int = 0
    t_per_rot: int = 0

    def __getitem__(self, kind: str) -> int:
        return self.counts.get(kind, 0)

    @property
    def cnot_count(self) -> int:
        return self["CNOT"] + self["CZ"]

    @property
    def h_count(self) -> int:
        return self["H"] + 2 * self["CZ"]

    @property
    def t_count(self) -> int:
        return self["T"] + self["Tdg"] + self.charged_rotations * self.t_per_rot

    @property
    def clifford_plus_t_count(self) -> int:
        return self.h_count + self.cnot_count + self.t_count + self.exact_rewrites

    def __add__(self, other: ResourceReport) -> ResourceReport:
        if self.t_per_rot and other.t_per_rot and self.t_per_rot != other.t_per_rot:
            raise ValueError("cannot add reports with different rotation charges")
        counts = dict(self.counts)
        for k, v in other.counts.items():
            counts[k] = counts.get(k, 0) + v
        return ResourceReport(
            counts,
            self.exact_rewrites + other.exact_rewrites,
            self.charged_rotations + other.charged_rotations,
            self.t_per_rot or other.t_per_rot,
        )

    def scaled(self, factor: int) -> ResourceReport:
        return ResourceReport(
            {k: v * factor for k, v in self.counts.items()},
            self.exact_rewrites * factor,
            self.charged_rotations * factor,
            self.t_per_rot,
        )

    def aggregates(self) -> dict:
        return {
            "cnot": self.cnot_count,
            "clifford_t": self.clifford_plus_t_count,
            "t": self.t_count,
        }

    def to_dict(self) -> dict:
        return {
            "counts": {k: self.counts.get(k, 0) for k in GATE_KINDS},
            "exact_rewrites": self.exact_rewrites,
            "charged_rotations": self.charged_rotations,
            "t_per_rot": self.t_per_rot,
            **self.aggregates(),
        }


def count_gates(c: Circuit) -> ResourceReport:
    counts = {k: 0 for k in GATE_KINDS}
    for g in c.gates:
        counts[g.kind] += 1
    return ResourceReport(counts)


def t_per_rotation(eps_rot: float, slope: float = 3.0, offset: float = 0.0) -> int:
    """T gates charged for one generic Rz synthesized to precision ``eps_rot``."""
    if not 0 < eps_rot < 0.5:
        raise ValueError(f"eps_rot must lie in (0, 0.5), got {eps_rot}")
    return max(0, math.ceil(slope * math.log2(1 / eps_rot) + offset))


# Rz(m pi/4) == T^m up to a global phase
_EIGHTH_TURN = {
    0: (),
    1: ("T",),
    2: ("S",),
    3: ("S", "T"),
    4: ("Z",),
    5: ("Z", "T"),
    6: ("Sdg",),
    7: ("Tdg",),
}


def transpile_clifford_t(
    c: Circuit,
    eps_rot: float = DEFAULT_EPS_ROT,
    slope: float = 3.0,
    offset: float = 0.0,
    atol: float = 1e-12,
) -> tuple[Circuit, ResourceReport]:
    """Rewrite pi/4-multiple rotations exactly and bill the rest in T gates.

    Exact rewrites agree with the original rotation up to a global phase.
    Generic rotations stay in the output circuit, tagged with ``t_charge``.
    """
    charge = t_per_rotation(eps_rot, slope, offset)
    out: list[Gate] = []
    rewrites = charged = 0
    for g in c.gates:
        if g.kind != "RZ":
            out.append(g)
            continue
        m = g.angle / (math.pi / 4)
        nearest = round(m)
        if abs(m - nearest) * (math.pi / 4) <= atol:
            for kind in _EIGHTH_TURN[nearest % 8]:
                out.append(Gate(kind, g.qubits))
                if kind not in ("T", "Tdg"):
                    rewrites += 1
        else:
            out.append(Gate("RZ", g.qubits, g.angle, t_charge=charge))
            charged += 1
    new = Circuit(c.n_qubits, tuple(out))
    base = count_gates(new)
    return new, ResourceReport(base.counts, rewrites, charged, charge)


# --------------------------------------------------------------------------
# Disorder statistics

CSV_COLUMNS = (
    "N", "k", "p", "seed_count", "order",
    "cnot_mean", "cnot_se", "cliffT_mean", "cliffT_se", "t_mean", "t_se",
)

_METRICS = ("cnot", "clifford_t", "t")


@dataclass(frozen=True)
class ResourceStats:
    """Running sums for mean and standard error over disorder instances.

    Merging is exact integer addition, so sharded runs combine to identical
    totals in any order.
    """

    n: int = 0
    sums: tuple = (0, 0, 0)
    sumsq: tuple = (0, 0, 0)

    @classmethod
    def from_report(cls, report: ResourceReport) -> ResourceStats:
        vals = tuple(report.aggregates()[m] for m in _METRICS)
        return cls(1, vals, tuple(v * v for v in vals))

    @classmethod
    def from_reports(cls, reports: Iterable[ResourceReport]) -> ResourceStats:
        stats = cls()
        for r in reports:
            stats = stats.merge(cls.from_report(r))
        return stats

    def merge(self, other: ResourceStats) -> ResourceStats:
        return ResourceStats(
            self.n + other.n,
            tuple(a + b for a, b in zip(self.sums, other.sums)),
            tuple(a + b for a, b in zip(self.sumsq, other.sumsq)),
        )

    def mean(self, metric: str) -> float:
        i = _METRICS.index(metric)
        return self.sums[i] / self.n if self.n else math.nan

    def stderr(self, metric: str) -> float | None:
        """Standard error of the mean; ``None`` below two samples."""
        if self.n < 2:
            return None
        i = _METRICS.index(metric)
        s, ss, n = self.sums[i], self.sumsq[i], self.n
        var = max(0.0, (ss - s * s / n) / (n - 1))
        return math.sqrt(var / n)

    def row(self, **meta) -> dict:
        def fmt(v):
            return "" if v is None else v

        return {
            **meta,
            "seed_count": self.n,
            "cnot_mean": self.mean("cnot"),
            "cnot_se": fmt(self.stderr("cnot")),
            "cliffT_mean": self.mean("clifford_t"),
            "cliffT_se": fmt(self.stderr("clifford_t")),
            "t_mean": self.mean("t"),
            "t_se": fmt(self.stderr("t")),
        }

