"""Batch front end: ``sparsesyk {generate,compile,count,sweep,bound,verify}``.

Every command writes into one run directory::

    <out>/instances/*.json   sampled disorder realizations
    <out>/qasm/*.qasm        compiled circuits (compile only)
    <out>/reports/*          JSON / CSV reports
    <out>/manifest.json      resolved config, its hash, seeds, file digests

Settings come from built-in defaults, then an optional JSON or TOML file
(``--config``), then command-line flags.  Nothing time-dependent is written
into the artifacts, so equal configs give byte-identical files.

Exit codes: 0 success, 2 configuration error, 3 certification failure.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
from dataclasses import asdict, dataclass, field, fields
from datetime import datetime, timezone
from pathlib import Path

from .circuit import CSV_COLUMNS, DEFAULT_EPS_ROT, ResourceStats, count_gates, emit_qasm, parse_qasm
from .clustering import STRATEGIES
from .pipeline import certify, compile_hamiltonian, loglog_slope, step_resources
from .syk import SykInstance, sample_instance
from .trotter import EXACT_BOUND_MAX_QUBITS, TrotterPlan, bound_error_exact, bound_error_pauli, plan_steps

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CERT = 3

COMMANDS = ("generate", "compile", "count", "sweep", "bound", "verify")
# per-step resource counts default to one first-order step (H_1 ... H_m once)
_COUNT_COMMANDS = ("count", "sweep")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    N: list = field(default_factory=lambda: [8])
    k: list | None = None
    p: list | None = None
    J: float = 1.0
    seeds: list | None = None
    seed_count: int | None = None
    order: int | None = None
    t: float = 1.0
    r: int | None = None
    epsilon: float = 0.01
    eps_rot: float = DEFAULT_EPS_ROT
    coloring: str = "largest_first"
    bound_method: str = "both"
    coupling_prefactor: bool = False
    merge_half_steps: bool = False
    compress: bool = False
    out: str | None = None

    def validate(self) -> RunConfig:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if (self.k is None) == (self.p is None):
            raise ConfigError("give exactly one of k and p")
        self.N = [int(n) for n in _as_list(self.N)]
        for n in self.N:
            if n < 4 or n % 2:
                raise ConfigError(f"N must be even and >= 4, got {n}")
        if self.k is not None:
            self.k = [float(v) for v in _as_list(self.k)]
            if any(not v > 0 for v in self.k):
                raise ConfigError("k values must be positive")
        else:
            self.p = [float(v) for v in _as_list(self.p)]
            if any(not 0 < v <= 1 for v in self.p):
                raise ConfigError("p values must lie in (0, 1]")
        if not self.J > 0:
            raise ConfigError("J must be positive")
        if self.seeds is not None and self.seed_count is not None:
            raise ConfigError("give seeds or seed_count, not both")
        if self.seeds is None:
            count = 10 if self.seed_count is None else int(self.seed_count)
            if count < 1:
                raise ConfigError("seed_count must be >= 1")
            self.seeds = list(range(count))
        self.seeds = [int(s) for s in _as_list(self.seeds)]
        if any(not 0 <= s < 2**64 for s in self.seeds):
            raise ConfigError("seeds must be non-negative 64-bit integers")
        self.seed_count = None
        if self.order is None:
            self.order = 1 if self.command in _COUNT_COMMANDS else 2
        if self.order not in (1, 2):
            raise ConfigError(f"order must be 1 or 2, got {self.order}")
        if not self.t > 0:
            raise ConfigError("t must be positive")
        if self.r is not None and int(self.r) < 1:
            raise ConfigError("r must be >= 1")
        if not 0 < self.epsilon < 1:
            raise ConfigError("epsilon must lie in (0, 1)")
        if not 0 < self.eps_rot < 0.5:
            raise ConfigError("eps_rot must lie in (0, 0.5)")
        if self.coloring not in STRATEGIES:
            raise ConfigError(f"coloring must be one of {sorted(STRATEGIES)}")
        if self.bound_method not in ("exact", "pauli", "both"):
            raise ConfigError("bound_method must be exact, pauli or both")
        return self

    def hashable(self) -> dict:
        doc = asdict(self)
        doc.pop("out")
        return doc

    def digest(self) -> str:
        return hashlib.sha256(_dumps(self.hashable()).encode()).hexdigest()

    def points(self):
        """``(N, k, p)`` grid points in a fixed order."""
        for n in self.N:
            for v in self.k if self.k is not None else self.p:
                yield (n, v, None) if self.k is not None else (n, None, v)

    def steps(self) -> int:
        return int(self.r) if self.r is not None else plan_steps(self.order, self.t, self.epsilon)


def _as_list(v):
    return list(v) if isinstance(v, (list, tuple)) else [v]


def _dumps(doc) -> str:
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


# --------------------------------------------------------------------------
# Config loading

def _read_config_file(path: str) -> dict:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        if p.suffix == ".toml":
            try:
                import tomllib
            except ModuleNotFoundError:
                import tomli as tomllib
            return tomllib.loads(text)
        return json.loads(text)
    except ValueError as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from exc


def _csv_list(kind):
    def parse(text: str):
        try:
            return [kind(v) for v in text.split(",") if v.strip()]
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from exc

    return parse


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sparsesyk", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="JSON or TOML file with default settings")
        sp.add_argument("--N", type=_csv_list(int), help="Majorana counts, comma separated")
        sp.add_argument("--k", type=_csv_list(float), help="target hypergraph degrees")
        sp.add_argument("--p", type=_csv_list(float), help="retention probabilities")
        sp.add_argument("--J", type=float)
        sp.add_argument("--seeds", type=_csv_list(int))
        sp.add_argument("--seed-count", type=int, dest="seed_count")
        sp.add_argument("--order", type=int, choices=(1, 2))
        sp.add_argument("--t", type=float, help="dimensionless time J*t")
        sp.add_argument("--r", type=int, help="Trotter steps (default: planned from epsilon)")
        sp.add_argument("--epsilon", type=float)
        sp.add_argument("--eps-rot", type=float, dest="eps_rot")
        sp.add_argument("--coloring", choices=sorted(STRATEGIES))
        sp.add_argument("--bound-method", choices=("exact", "pauli", "both"), dest="bound_method")
        sp.add_argument("--coupling-prefactor", action="store_true", default=None, dest="coupling_prefactor")
        sp.add_argument(
            "--merge-half-steps", action="store_true", default=None, dest="merge_half_steps"
        )
        sp.add_argument(
            "--compress", action="store_true", default=None,
            help="CNOT-compress the diagonalized Z strings",
        )
        sp.add_argument("--out", help="run directory (default runs/<UTC timestamp>)")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    known = {f.name for f in fields(RunConfig)}
    merged: dict = {}
    if args.config:
        file_cfg = _read_config_file(args.config)
        unknown = set(file_cfg) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        merged.update(file_cfg)
    flags = {k: v for k, v in vars(args).items() if k in known and v is not None}
    # a flag choosing k or p overrides the file's choice of the other
    if "k" in flags:
        merged.pop("p", None)
    if "p" in flags:
        merged.pop("k", None)
    if "seeds" in flags:
        merged.pop("seed_count", None)
    if "seed_count" in flags:
        merged.pop("seeds", None)
    merged.update(flags)
    merged["command"] = args.command
    try:
        return RunConfig(**merged).validate()
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


# --------------------------------------------------------------------------
# Run directory

class RunDir:
    def __init__(self, root: Path):
        self.root = root
        self.files: dict[str, str] = {}
        for sub in ("instances", "qasm", "reports"):
            (root / sub).mkdir(parents=True, exist_ok=True)

    def write(self, rel: str, text: str) -> Path:
        path = self.root / rel
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_text(text)
        os.replace(tmp, path)
        self.files[rel] = hashlib.sha256(text.encode()).hexdigest()
        return path

    def finish(self, cfg: RunConfig) -> None:
        manifest = {
            "command": cfg.command,
            "config": cfg.hashable(),
            "config_hash": cfg.digest(),
            "seeds": cfg.seeds,
            "files": dict(sorted(self.files.items())),
        }
        self.write("manifest.json", _dumps(manifest))


def _default_out() -> Path:
    stamp = datetime.now(timezone.utc).strftime("%Y%m%dT%H%M%SZ")
    path = Path("runs") / stamp
    n = 1
    while path.exists():
        path = Path("runs") / f"{stamp}-{n}"
        n += 1
    return path


def _instance_name(n, k, p, seed) -> str:
    tag = f"k{k:g}" if k is not None else f"p{p:g}"
    return f"N{n}_{tag}_s{seed}"


def _sample(cfg: RunConfig, n, k, p, seed) -> SykInstance:
    return sample_instance(n, cfg.J, p, k_target=k, seed=seed)


def _instances(cfg: RunConfig, run: RunDir | None):
    for n, k, p in cfg.points():
        for seed in cfg.seeds:
            inst = _sample(cfg, n, k, p, seed)
            name = _instance_name(n, k, p, seed)
            if run is not None:
                run.write(f"instances/{name}.json", inst.to_json())
            yield name, inst


def _meta(cfg: RunConfig) -> dict:
    return {"config_hash": cfg.digest(), "seeds": cfg.seeds}


# --------------------------------------------------------------------------
# Commands

def cmd_generate(cfg: RunConfig, run: RunDir, log) -> int:
    rows = []
    for name, inst in _instances(cfg, run):
        rows.append({
            "instance": name, "N": inst.N, "p": inst.p, "k_target": inst.k_target,
            "seed": inst.seed, "n_terms": len(inst.terms),
        })
        log(f"{name}: {len(inst.terms)} terms, p={inst.p:.6g}")
    run.write("reports/generate.json", _dumps({**_meta(cfg), "instances": rows}))
    return EXIT_OK


def cmd_compile(cfg: RunConfig, run: RunDir, log) -> int:
    rows, status = [], EXIT_OK
    r = cfg.steps()
    for name, inst in _instances(cfg, run):
        compiled = compile_hamiltonian(inst, cfg.coloring, cfg.compress)
        plan = TrotterPlan(cfg.order, cfg.t / cfg.J, r, cfg.epsilon)
        circuit = compiled.circuit(plan, cfg.merge_half_steps)
        text = emit_qasm(circuit)
        run.write(f"qasm/{name}.qasm", text)
        round_trip = parse_qasm(text) == circuit
        if not round_trip:
            status = EXIT_CERT
        rows.append({
            "instance": name, "order": cfg.order, "t": cfg.t, "r": r,
            "clusters": len(compiled.clusters), "n_terms": len(compiled.h),
            "gates": len(circuit), "counts": count_gates(circuit).to_dict(),
            "qasm_round_trip": round_trip,
        })
        log(f"{name}: {len(circuit)} gates, r={r}, round-trip {'ok' if round_trip else 'FAILED'}")
    run.write("reports/compile.json", _dumps({**_meta(cfg), "circuits": rows}))
    return status


def _stats_rows(cfg: RunConfig):
    rows, raw = [], []
    for n, k, p in cfg.points():
        stats = ResourceStats()
        per_seed = []
        for seed in cfg.seeds:
            inst = _sample(cfg, n, k, p, seed)
            report = step_resources(compile_hamiltonian(inst, cfg.coloring, cfg.compress), cfg.order, cfg.t / cfg.J, cfg.eps_rot)
            stats = stats.merge(ResourceStats.from_report(report))
            per_seed.append({"seed": seed, **report.aggregates()})
        p_val = inst.p
        k_val = k if k is not None else p_val * n**3 / 24
        rows.append(stats.row(N=n, k=k_val, p=p_val, order=cfg.order))
        raw.append({"N": n, "k": k_val, "p": p_val, "n": stats.n,
                    "sums": list(stats.sums), "sumsq": list(stats.sumsq), "per_seed": per_seed})
    return rows, raw


def _csv_text(rows) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({c: row[c] for c in CSV_COLUMNS})
    return buf.getvalue()


def cmd_count(cfg: RunConfig, run: RunDir, log) -> int:
    rows, raw = _stats_rows(cfg)
    run.write("reports/count.csv", _csv_text(rows))
    run.write("reports/count.json", _dumps({
        **_meta(cfg), "per_step": True, "order": cfg.order, "eps_rot": cfg.eps_rot,
        "cliffT_constituents": "H + CNOT + charged T + exact-angle rewrites (CZ billed as CNOT + 2 H)",
        "points": raw,
    }))
    for row in rows:
        log(f"N={row['N']} k={row['k']:.4g}: CNOT {row['cnot_mean']:.1f} (se {row['cnot_se'] or 0:.1f}), "
            f"H+CNOT+T {row['cliffT_mean']:.1f}, T {row['t_mean']:.1f}")
    return EXIT_OK


def cmd_sweep(cfg: RunConfig, run: RunDir, log) -> int:
    rows, raw = _stats_rows(cfg)
    run.write("reports/sweep.csv", _csv_text(rows))
    fits: dict = {}
    by_n: dict = {}
    for row in rows:
        by_n.setdefault(row["N"], []).append(row)
    for n, group in by_n.items():
        if len({g["k"] for g in group}) > 1:
            fits.setdefault("k_exponent", {})[str(n)] = {
                m: loglog_slope([g["k"] for g in group], [g[f"{m}_mean"] for g in group])
                for m in ("cnot", "cliffT", "t")
            }
            ordered = sorted(group, key=lambda g: g["p"])
            fits.setdefault("monotone_in_p", {})[str(n)] = all(
                a["cnot_mean"] <= b["cnot_mean"] for a, b in zip(ordered, ordered[1:])
            )
    by_k: dict = {}
    for row in rows:
        by_k.setdefault(row["k"], []).append(row)
    for k, group in by_k.items():
        if len(group) > 1 and cfg.k is not None:
            fits.setdefault("n_slope", {})[f"{k:g}"] = {
                m: loglog_slope([g["N"] for g in group], [g[f"{m}_mean"] for g in group])
                for m in ("cnot", "cliffT", "t")
            }
    run.write("reports/sweep.json", _dumps({**_meta(cfg), "order": cfg.order, "fits": fits, "points": raw}))
    for key, val in fits.items():
        log(f"{key}: {json.dumps(val, sort_keys=True)}")
    return EXIT_OK


def cmd_bound(cfg: RunConfig, run: RunDir, log) -> int:
    r = cfg.steps()
    t = cfg.t / cfg.J
    rows = []
    for name, inst in _instances(cfg, run):
        compiled = compile_hamiltonian(inst, cfg.coloring, cfg.compress)
        entry = {"instance": name, "bounds": []}
        kw = {"J": cfg.J, "coupling_prefactor": cfg.coupling_prefactor}
        if cfg.bound_method in ("exact", "both") and compiled.h.n <= EXACT_BOUND_MAX_QUBITS:
            entry["bounds"].append(json.loads(
                bound_error_exact(compiled.h, compiled.clusters, cfg.order, t, r, **kw).to_json()))
        if cfg.bound_method in ("pauli", "both"):
            entry["bounds"].append(json.loads(
                bound_error_pauli(compiled.h, compiled.clusters, cfg.order, t, r, **kw).to_json()))
        rows.append(entry)
        log(f"{name}: " + ", ".join(f"{b['method']}={b['value']:.4g}" for b in entry["bounds"]))
    run.write("reports/bound.json", _dumps({**_meta(cfg), "results": rows}))
    return EXIT_OK


def cmd_verify(cfg: RunConfig, run: RunDir, log) -> int:
    r = cfg.steps()
    t = cfg.t / cfg.J
    rows, ok = [], True
    for name, inst in _instances(cfg, run):
        if inst.n_qubits > EXACT_BOUND_MAX_QUBITS:
            raise ConfigError(f"verify needs N <= {2 * EXACT_BOUND_MAX_QUBITS}, got {inst.N}")
        cert = certify(compile_hamiltonian(inst, cfg.coloring, cfg.compress), cfg.order, t, r)
        ok &= cert.passed
        rows.append({"instance": name, **cert.to_dict()})
        log(f"{name}: measured {cert.measured:.3e} <= exact {cert.exact_bound:.3e} "
            f"<= pauli {cert.pauli_bound:.3e}: {'PASS' if cert.passed else 'FAIL'}")
    run.write("reports/verify.json", _dumps({**_meta(cfg), "passed": ok, "results": rows}))
    return EXIT_OK if ok else EXIT_CERT


_HANDLERS = {
    "generate": cmd_generate,
    "compile": cmd_compile,
    "count": cmd_count,
    "sweep": cmd_sweep,
    "bound": cmd_bound,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        cfg = resolve_config(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    def log(msg):
        print(msg, file=sys.stderr)

    root = Path(cfg.out) if cfg.out else _default_out()
    run = RunDir(root)
    try:
        status = _HANDLERS[cfg.command](cfg, run, log)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    run.finish(cfg)
    print(root)
    return status


if __name__ == "__main__":
    sys.exit(main())
