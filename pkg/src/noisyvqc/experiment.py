"""Experiment grid driver: config ingestion, cell expansion, execution, and
persistence.

A config describes a cross product of (qubit count, observable, noise type,
probability, seed) cells.  Probability 0.0 entries and the "none" noise type
collapse into a single ideal cell per (n, observable, seed).  Each executed
cell writes its artifacts under its own directory inside the run directory,
and every invocation writes one manifest.json covering all cells.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace
from datetime import datetime, timezone
from functools import partial
from pathlib import Path

import numpy as np

from .ansatz import NOISE_POLICIES, build_ansatz
from .channels import CHANNEL_NAMES, _FACTORIES, channel_from_name, validate_cptp
from .landscape import grid_to_csv, flatness, scan
from .observables import Observable
from .trainer import CostSpec, bp_variance_probe, train

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "Cell",
    "RunRecord",
    "CONVERGENCE_THRESHOLD",
    "NO_TRAINING_DECREASE",
    "OBSERVABLE_NAMES",
    "MODES",
    "load_config",
    "expand_cells",
    "resolve_run_dir",
    "run",
    "run_validation",
    "summarize",
]

# global thresholds: a run "converges" when its final cost is at or below the
# first value; "no training" means total cost decrease at or below the second
CONVERGENCE_THRESHOLD = 0.1
NO_TRAINING_DECREASE = 0.05

OBSERVABLE_NAMES = ("pauli_x", "pauli_y", "pauli_z", "hermitian")
NOISE_NAMES = CHANNEL_NAMES + ("none",)
MODES = ("train", "landscape", "bp_variance", "validate")


class ConfigError(Exception):
    """Invalid configuration input (file, key, value, or environment)."""


@dataclass(frozen=True)
class ExperimentConfig:
    qubit_counts: tuple = (4, 6, 8, 10)
    layers: int = 2
    observables: tuple = OBSERVABLE_NAMES
    noise_types: tuple = CHANNEL_NAMES
    probabilities: tuple = (0.0, 0.1, 0.3, 0.5, 0.7, 0.9)
    seeds: tuple = tuple(range(10))
    iterations: int = 50
    learning_rate: float = 0.1
    noise_policy: str = "per_gate"
    mode: str = "train"


@dataclass(frozen=True)
class Cell:
    """One grid point: noise is a config name, "none" for the ideal baseline."""

    n: int
    observable: str
    noise: str
    probability: float
    seed: int

    @property
    def dirname(self) -> str:
        return f"{self.n}q_{self.observable}_{self.noise}_p{self.probability}_s{self.seed}"


@dataclass(frozen=True)
class RunRecord:
    n: int
    observable: str
    noise: str
    probability: float
    seed: int
    status: str
    duration_seconds: float
    path: str | None = None
    error: str | None = None
    final_cost: float | None = None
    converged: bool | None = None
    flatness: float | None = None
    variance: float | None = None


# ---------------------------------------------------------------------------
# config loading

def _as_int(value, where: str, minimum=None, maximum=None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where}: expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigError(f"{where}: {value} is below the minimum {minimum}")
    if maximum is not None and value > maximum:
        raise ConfigError(f"{where}: {value} is above the maximum {maximum}")
    return value


def _as_number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    return float(value)


def _as_list(value, where: str) -> list:
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{where}: expected a nonempty list, got {value!r}")
    return value


def _no_duplicates(values, where: str) -> None:
    seen = set()
    for i, v in enumerate(values):
        if v in seen:
            raise ConfigError(f"{where}[{i}]: duplicate value {v!r}")
        seen.add(v)


def _validated(data: dict) -> dict:
    out = {}
    if "qubit_counts" in data:
        vals = _as_list(data["qubit_counts"], "qubit_counts")
        out["qubit_counts"] = tuple(
            _as_int(v, f"qubit_counts[{i}]", minimum=2, maximum=12)
            for i, v in enumerate(vals)
        )
        _no_duplicates(out["qubit_counts"], "qubit_counts")
    if "layers" in data:
        out["layers"] = _as_int(data["layers"], "layers", minimum=1)
    if "observables" in data:
        vals = _as_list(data["observables"], "observables")
        for i, v in enumerate(vals):
            if v not in OBSERVABLE_NAMES:
                raise ConfigError(
                    f"observables[{i}]: unknown observable {v!r}; "
                    f"expected one of {OBSERVABLE_NAMES}"
                )
        _no_duplicates(vals, "observables")
        out["observables"] = tuple(vals)
    if "noise_types" in data:
        vals = _as_list(data["noise_types"], "noise_types")
        for i, v in enumerate(vals):
            if v not in NOISE_NAMES:
                raise ConfigError(
                    f"noise_types[{i}]: unknown noise type {v!r}; "
                    f"expected one of {NOISE_NAMES}"
                )
        _no_duplicates(vals, "noise_types")
        out["noise_types"] = tuple(vals)
    if "probabilities" in data:
        vals = _as_list(data["probabilities"], "probabilities")
        probs = []
        for i, v in enumerate(vals):
            p = _as_number(v, f"probabilities[{i}]")
            if not 0.0 <= p <= 1.0:
                raise ConfigError(f"probabilities[{i}]: {p} is out of range [0, 1]")
            probs.append(p)
        _no_duplicates(probs, "probabilities")
        out["probabilities"] = tuple(probs)
    if "seeds" in data:
        vals = _as_list(data["seeds"], "seeds")
        out["seeds"] = tuple(
            _as_int(v, f"seeds[{i}]", minimum=0) for i, v in enumerate(vals)
        )
        _no_duplicates(out["seeds"], "seeds")
    if "iterations" in data:
        out["iterations"] = _as_int(data["iterations"], "iterations", minimum=1)
    if "learning_rate" in data:
        lr = _as_number(data["learning_rate"], "learning_rate")
        if not math.isfinite(lr) or lr <= 0:
            raise ConfigError(f"learning_rate: must be a positive finite number, got {lr}")
        out["learning_rate"] = lr
    if "noise_policy" in data:
        v = data["noise_policy"]
        if v not in NOISE_POLICIES:
            raise ConfigError(
                f"noise_policy: unknown policy {v!r}; expected one of {NOISE_POLICIES}"
            )
        out["noise_policy"] = v
    if "mode" in data:
        v = data["mode"]
        if v not in MODES:
            raise ConfigError(f"mode: unknown mode {v!r}; expected one of {MODES}")
        out["mode"] = v
    return out


def load_config(path, expected_mode: str | None = None) -> ExperimentConfig:
    """Read and validate a JSON config; missing keys fall back to defaults.

    When expected_mode is given (the CLI subcommand), a conflicting explicit
    mode key is rejected and the effective mode is expected_mode.
    """
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {path}")
    text = p.read_text(encoding="utf-8")
    if not text.strip():
        data = {}
    else:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config parse error in {path}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"config must be a JSON object, got {type(data).__name__}")
    known = set(ExperimentConfig.__dataclass_fields__)
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")
    fields = _validated(data)
    config = ExperimentConfig(**fields)
    if expected_mode is not None:
        if "mode" in data and config.mode != expected_mode:
            raise ConfigError(
                f"mode: config says {config.mode!r} but the {expected_mode!r} "
                f"command was invoked"
            )
        config = replace(config, mode=expected_mode)
    return config


# ---------------------------------------------------------------------------
# grid expansion

def expand_cells(config: ExperimentConfig, seed_offset: int = 0) -> list:
    """Cross product of the config grid in deterministic enumeration order.

    The ideal baseline (probability 0.0 or noise type "none") appears once per
    (n, observable, seed) and is listed before the noisy settings.
    """
    seeds = [s + seed_offset for s in config.seeds]
    for s in seeds:
        if s < 0:
            raise ConfigError(f"effective seed {s} is negative (seed offset {seed_offset})")
    settings = []
    if config.noise_policy == "none":
        settings.append(("none", 0.0))
    else:
        if "none" in config.noise_types or 0.0 in config.probabilities:
            settings.append(("none", 0.0))
        for t in config.noise_types:
            if t == "none":
                continue
            for p in config.probabilities:
                if p != 0.0:
                    settings.append((t, p))
    return [
        Cell(n, obs, noise, p, s)
        for n in config.qubit_counts
        for obs in config.observables
        for noise, p in settings
        for s in seeds
    ]


def _materialize(config: ExperimentConfig, cell: Cell):
    """Build the (ansatz, cost spec, channel) triple for one cell."""
    policy = "none" if cell.noise == "none" else config.noise_policy
    ansatz = build_ansatz(cell.n, config.layers, policy)
    kind = "custom_hermitian" if cell.observable == "hermitian" else cell.observable
    spec = CostSpec.for_observable(Observable(kind, cell.n))
    channel = channel_from_name(cell.noise, cell.probability)
    return ansatz, spec, channel


# ---------------------------------------------------------------------------
# cell workers (module level so they pickle for process pools)

def _trace_csv(trace) -> str:
    lines = ["iteration,cost,grad_l2"]
    for i in range(len(trace.costs)):
        lines.append(f"{i},{trace.costs[i]:.17g},{trace.grad_norms[i]:.17g}")
    return "\n".join(lines) + "\n"


def _train_cell(config: ExperimentConfig, cell: Cell) -> dict:
    t0 = time.perf_counter()
    try:
        ansatz, spec, channel = _materialize(config, cell)
        trace = train(ansatz, spec, channel, seed=cell.seed,
                      iterations=config.iterations,
                      learning_rate=config.learning_rate)
        return {
            "status": "success",
            "text": _trace_csv(trace),
            "filename": "trace.csv",
            "final_cost": trace.final_cost,
            "converged": trace.final_cost <= CONVERGENCE_THRESHOLD,
            "duration": time.perf_counter() - t0,
        }
    except Exception as exc:
        return {
            "status": "failure",
            "error": f"{type(exc).__name__}: {exc}",
            "duration": time.perf_counter() - t0,
        }


def _landscape_cell(config: ExperimentConfig, axis1: int, axis2: int,
                    resolution: int, axis_range, cell: Cell) -> dict:
    t0 = time.perf_counter()
    try:
        ansatz, spec, channel = _materialize(config, cell)
        grid = scan(ansatz, spec, channel, axis1=axis1, axis2=axis2,
                    axis_range=axis_range, resolution=resolution,
                    base_seed=cell.seed)
        return {
            "status": "success",
            "text": grid_to_csv(grid),
            "filename": "landscape.csv",
            "flatness": flatness(grid),
            "duration": time.perf_counter() - t0,
        }
    except Exception as exc:
        return {
            "status": "failure",
            "error": f"{type(exc).__name__}: {exc}",
            "duration": time.perf_counter() - t0,
        }


def _bp_cell(config: ExperimentConfig, num_samples: int, cell: Cell) -> dict:
    t0 = time.perf_counter()
    try:
        ansatz, spec, channel = _materialize(config, cell)
        var = bp_variance_probe(ansatz, spec, channel, num_samples=num_samples,
                                seed=cell.seed)
        return {
            "status": "success",
            "variance": var,
            "duration": time.perf_counter() - t0,
        }
    except Exception as exc:
        return {
            "status": "failure",
            "error": f"{type(exc).__name__}: {exc}",
            "duration": time.perf_counter() - t0,
        }


# ---------------------------------------------------------------------------
# execution

def resolve_run_dir(out_dir=None, base_dir: str = "runs") -> Path:
    """Pick the run directory: out_dir if given, else a fresh timestamped one."""
    if out_dir is not None:
        return Path(out_dir)
    stamp = datetime.now(timezone.utc).strftime("%Y%m%dT%H%M%SZ")
    path = Path(base_dir) / stamp
    k = 1
    while path.exists():
        path = Path(base_dir) / f"{stamp}-{k}"
        k += 1
    return path


def _execute(config: ExperimentConfig, cells, worker, run_dir: Path,
             jobs: int, verbose: bool) -> list:
    run_dir.mkdir(parents=True, exist_ok=True)
    records = []
    if jobs > 1:
        pool = ProcessPoolExecutor(max_workers=jobs)
        results = pool.map(worker, cells)
    else:
        pool = None
        results = map(worker, cells)
    try:
        for i, (cell, res) in enumerate(zip(cells, results)):
            rel_path = None
            if res["status"] == "success" and "text" in res:
                cell_dir = run_dir / cell.dirname
                cell_dir.mkdir(parents=True, exist_ok=True)
                target = cell_dir / res["filename"]
                with open(target, "w", encoding="utf-8", newline="\n") as fh:
                    fh.write(res["text"])
                rel_path = f"{cell.dirname}/{res['filename']}"
            records.append(RunRecord(
                n=cell.n, observable=cell.observable, noise=cell.noise,
                probability=cell.probability, seed=cell.seed,
                status=res["status"], duration_seconds=res["duration"],
                path=rel_path, error=res.get("error"),
                final_cost=res.get("final_cost"), converged=res.get("converged"),
                flatness=res.get("flatness"), variance=res.get("variance"),
            ))
            if verbose:
                tag = res["status"] if res["status"] == "success" else \
                    f"{res['status']}: {res.get('error')}"
                print(f"[{i + 1}/{len(cells)}] {cell.dirname} {tag} "
                      f"({res['duration']:.1f}s)", flush=True)
    finally:
        if pool is not None:
            pool.shutdown()
    return records


def _write_manifest(run_dir: Path, config: ExperimentConfig, seed_offset: int,
                    records) -> None:
    manifest = {
        "mode": config.mode,
        "created_utc": datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ"),
        "seed_offset": seed_offset,
        "config": asdict(config),
        "num_cells": len(records),
        "cells": [asdict(r) for r in records],
    }
    with open(run_dir / "manifest.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")


def run_validation(probabilities=None):
    """CPTP completeness sweep over every channel factory and probability.

    Returns (all_ok, report_lines).
    """
    if probabilities is None:
        probabilities = [i / 10 for i in range(11)]
    lines = []
    all_ok = True
    eye = np.eye(2)
    for name in CHANNEL_NAMES:
        factory = _FACTORIES[name]
        for p in probabilities:
            channel = factory(p)
            acc = np.zeros((2, 2), dtype=np.complex128)
            for k in channel.operators:
                acc += k.conj().T @ k
            dev = float(np.max(np.abs(acc - eye)))
            ok = validate_cptp(channel, 1e-12)
            all_ok = all_ok and ok
            lines.append(
                f"{name} p={p:.1f}: max |sum K^t K - I| = {dev:.3e} "
                f"{'ok' if ok else 'FAIL'}"
            )
    return all_ok, lines


def run(config: ExperimentConfig, out_dir=None, jobs: int = 1,
        seed_offset: int = 0, axis1: int = 0, axis2: int = 1,
        resolution: int = 50, axis_range=(-math.pi, math.pi),
        num_samples: int = 200, verbose: bool = False) -> list:
    """Execute every cell of the config grid and write artifacts plus manifest.

    A cell that fails numerically is recorded in the manifest and skipped;
    filesystem errors abort the run.
    """
    if config.mode == "validate":
        ok, lines = run_validation()
        if verbose:
            for line in lines:
                print(line)
        status = "success" if ok else "failure"
        return [RunRecord(n=0, observable="", noise="", probability=0.0, seed=0,
                          status=status, duration_seconds=0.0,
                          error=None if ok else "CPTP validation failed")]
    cells = expand_cells(config, seed_offset)
    run_dir = Path(out_dir) if out_dir is not None else resolve_run_dir(None)
    if config.mode == "train":
        worker = partial(_train_cell, config)
    elif config.mode == "landscape":
        worker = partial(_landscape_cell, config, axis1, axis2, resolution,
                         tuple(axis_range))
    elif config.mode == "bp_variance":
        worker = partial(_bp_cell, config, num_samples)
    else:
        raise ConfigError(f"unknown mode {config.mode!r}")
    records = _execute(config, cells, worker, run_dir, jobs, verbose)
    if config.mode == "bp_variance":
        lines = ["n,observable,noise,probability,seed,samples,variance"]
        for r in records:
            if r.status == "success":
                lines.append(
                    f"{r.n},{r.observable},{r.noise},{r.probability},{r.seed},"
                    f"{num_samples},{r.variance:.17g}"
                )
        with open(run_dir / "bp_variance.csv", "w", encoding="utf-8",
                  newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    _write_manifest(run_dir, config, seed_offset, records)
    return records


# ---------------------------------------------------------------------------
# summaries

def _read_trace(path: Path):
    costs = []
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != "iteration,cost,grad_l2":
            raise ValueError(f"unexpected trace header in {path}: {header!r}")
        for line in fh:
            line = line.strip()
            if line:
                costs.append(float(line.split(",")[1]))
    return costs


def summarize(runs_dir):
    """Aggregate a train run directory per (n, observable, noise, probability).

    Writes summary.csv into the directory and returns (rows, table_text),
    each row being (n, observable, noise, probability, num_seeds,
    mean_final_cost, convergence_fraction, mean_cost_decrease).
    """
    runs_dir = Path(runs_dir)
    manifest_path = runs_dir / "manifest.json"
    if not manifest_path.is_file():
        raise FileNotFoundError(f"no manifest.json in {runs_dir}")
    with open(manifest_path, encoding="utf-8") as fh:
        manifest = json.load(fh)
    if manifest.get("mode") != "train":
        raise ValueError(f"summarize expects a train run, got mode {manifest.get('mode')!r}")
    groups = {}
    order = []
    for rec in manifest["cells"]:
        if rec["status"] != "success":
            continue
        key = (rec["n"], rec["observable"], rec["noise"], rec["probability"])
        if key not in groups:
            groups[key] = []
            order.append(key)
        costs = _read_trace(runs_dir / rec["path"])
        groups[key].append((costs[-1], costs[0] - costs[-1]))
    if not order:
        raise ValueError(f"no successful train cells found in {runs_dir}")
    rows = []
    for key in order:
        entries = groups[key]
        finals = [e[0] for e in entries]
        decreases = [e[1] for e in entries]
        num = len(entries)
        mean_final = sum(finals) / num
        conv = sum(1 for f in finals if f <= CONVERGENCE_THRESHOLD) / num
        mean_dec = sum(decreases) / num
        rows.append(key + (num, mean_final, conv, mean_dec))
    header = ("n,observable,noise,probability,num_seeds,mean_final_cost,"
              "convergence_fraction,mean_cost_decrease")
    lines = [header]
    for n, obs, noise, p, num, mf, cv, md in rows:
        lines.append(f"{n},{obs},{noise},{p},{num},{mf:.17g},{cv:.17g},{md:.17g}")
    with open(runs_dir / "summary.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    widths = (3, 12, 18, 6, 6, 12, 10, 12)
    titles = ("n", "observable", "noise", "P", "seeds", "final(mean)", "conv", "dec(mean)")
    table = ["  ".join(t.ljust(w) for t, w in zip(titles, widths))]
    for n, obs, noise, p, num, mf, cv, md in rows:
        vals = (str(n), obs, noise, f"{p:g}", str(num), f"{mf:.4f}", f"{cv:.2f}",
                f"{md:.4f}")
        table.append("  ".join(v.ljust(w) for v, w in zip(vals, widths)))
    return rows, "\n".join(table)
