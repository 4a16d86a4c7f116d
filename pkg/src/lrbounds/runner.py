"""Configuration-driven experiment runner.

A run takes a JSON config, dispatches to one of the five experiment kinds, and
writes the kind's CSV/JSON artifacts plus a manifest (resolved config, package
version, wall time, any guard incidents) into the output directory.  Artifact
contents are a pure function of config and seed; the manifest's wall time is
the only field allowed to differ between reruns.

Validation failures raise ValueError with a field-level message before any
file is written; artifacts are assembled in memory and written last, so a
failing run leaves no partial outputs.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from . import bounds as _bounds
from .curves import FLOAT_FMT, BoundCurve, evaluate_family, light_cone_fit
from .errors import FitError, NumericError, ResourceLimitError
from .circuit import run_spread, strict_cone_check
from .exact import (commutator_norms, embed_site_operator, evolution_unitary,
                    PAULI_MATRICES, random_chain_spec, run_ghz_protocol,
                    run_w_protocol, state_transfer_commutator, swap_network)
from .graphs import (InteractionGraph, complete_graph, cycle_graph, grid_graph,
                     path_graph)
from .walk import walk_bound_gap, walk_table_csv

KINDS = ("bounds", "exact_verify", "walk", "circuit", "protocols")

_GENERATORS = {
    "path": lambda args, norm: path_graph(int(args[0]), norm),
    "cycle": lambda args, norm: cycle_graph(int(args[0]), norm),
    "grid": lambda args, norm: grid_graph(int(args[0]), int(args[1]), norm),
    "complete": lambda args, norm: complete_graph(int(args[0]), norm),
}


@dataclass
class ExperimentConfig:
    """Validated run request."""

    kind: str
    parameters: dict
    r_list: list
    t_list: list
    seed: int
    out: str
    workers: int = 1

    @classmethod
    def from_dict(cls, data: dict, out=None, seed=None, workers=None) -> "ExperimentConfig":
        if not isinstance(data, dict):
            raise ValueError("config root must be a JSON object")
        kind = data.get("kind")
        if kind not in KINDS:
            raise ValueError(f"config field 'kind' must be one of {KINDS}, got {kind!r}")
        params = data.get("parameters", {})
        if not isinstance(params, dict):
            raise ValueError("config field 'parameters' must be an object")
        grid = data.get("grid", {})
        r_list = list(grid.get("r", []))
        t_list = [float(t) for t in grid.get("t", [])]
        for name, values in (("r", r_list), ("t", t_list)):
            arr = np.asarray(values, dtype=float)
            if arr.size and not np.all(np.isfinite(arr)):
                raise ValueError(f"grid '{name}' contains non-finite values")
            if arr.size and not np.all(np.diff(arr) > 0):
                raise ValueError(f"grid '{name}' must be strictly ascending")
        seed_val = seed if seed is not None else data.get("seed", 0)
        seed_val = int(seed_val)
        if not 0 <= seed_val < 2 ** 64:
            raise ValueError("config field 'seed' must fit in 64 bits")
        out_val = out if out is not None else data.get("out")
        if not out_val:
            raise ValueError("output directory required ('out' field or --out)")
        workers_val = int(workers if workers is not None else data.get("workers", 1))
        if workers_val < 1:
            raise ValueError("'workers' must be a positive integer")
        return cls(kind, params, r_list, t_list, seed_val, str(out_val), workers_val)

    def require(self, *names):
        missing = [n for n in names if n not in self.parameters]
        if missing:
            raise ValueError(f"kind '{self.kind}' missing parameters: {missing}")

    def to_dict(self):
        return {
            "kind": self.kind,
            "parameters": self.parameters,
            "grid": {"r": self.r_list, "t": self.t_list},
            "seed": self.seed,
            "out": self.out,
            "workers": self.workers,
        }


def load_config(path, out=None, seed=None, workers=None) -> ExperimentConfig:
    try:
        with open(path) as f:
            data = json.load(f)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed config JSON: {exc}") from exc
    return ExperimentConfig.from_dict(data, out=out, seed=seed, workers=workers)


def _resolve_graph(params: dict) -> InteractionGraph:
    spec = params.get("graph")
    if spec is None:
        raise ValueError("graph families need a 'graph' parameter")
    if "file" in spec:
        return InteractionGraph.load(spec["file"])
    gen = spec.get("generator")
    if gen not in _GENERATORS:
        raise ValueError(f"unknown graph generator {gen!r}")
    return _GENERATORS[gen](spec.get("args", []), float(spec.get("norm", 1.0)))


# -- experiment kinds ----------------------------------------------------------


def _run_bounds(config: ExperimentConfig, incidents: list) -> dict:
    config.require("family")
    params = dict(config.parameters)
    family = params.pop("family")
    graph = a = b = None
    if family in ("MatrixExp", "PathSum", "SelfAvoiding"):
        config.require("graph", "A", "B")
        graph = _resolve_graph(params)
        a, b = params.pop("A"), params.pop("B")
        params.pop("graph")
    if not config.t_list:
        raise ValueError("bounds runs need a non-empty t grid")
    curve = evaluate_family(family, config.r_list, config.t_list, params,
                            graph=graph, a=a, b=b)
    artifacts = {"curve.csv": curve.to_csv()}
    eps = params.get("epsilon")
    if eps is not None:
        try:
            report = light_cone_fit(curve, float(eps))
            artifacts["lightcone.json"] = json.dumps(report.to_json_dict(), indent=1)
        except FitError as exc:
            incidents.append(f"light-cone fit skipped: {exc}")
    return artifacts


def _run_exact_verify(config: ExperimentConfig, incidents: list) -> dict:
    """Random nearest-neighbor chains against the chain closed form."""
    params = config.parameters
    n = int(params.get("n", 8))
    instances = int(params.get("instances", 5))
    h_max = float(params.get("h_max", 1.0))
    r_list = [int(r) for r in (config.r_list or range(1, n))]
    t_list = config.t_list or [0.25, 0.5, 1.0]
    if max(r_list) >= n:
        raise ValueError(f"grid r values must stay below n={n}")
    rng = np.random.default_rng(config.seed)
    rows = []
    worst = -math.inf
    paulis = [PAULI_MATRICES[s] for s in "XYZ"]
    for _ in range(instances):
        _, h_full = random_chain_spec(n, rng, h_max)
        for t in t_list:
            u = evolution_unitary(h_full, t)
            evolved = [u @ embed_site_operator(p, [0], n) @ u.conj().T for p in paulis]
            for r in r_list:
                measured = 0.0
                for a_t in evolved:
                    for p in paulis:
                        b_op = embed_site_operator(p, [r], n)
                        op, _ = commutator_norms(a_t, b_op)
                        measured = max(measured, op / 2.0)
                bound = _bounds.chain_bound(h_max, r, t)
                rows.append(("measured_half_commutator", r, t, measured))
                rows.append(("chain_bound", r, t, bound))
                worst = max(worst, measured - bound)
    ok = worst <= 1e-9
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["quantity", "r", "t", "value"])
    for q, r, t, v in rows:
        writer.writerow([q, r, FLOAT_FMT % t, FLOAT_FMT % v])
    summary = {"pass": bool(ok), "max_violation": worst, "instances": instances,
               "n": n, "h_max": h_max}
    if not ok:
        incidents.append(f"domination violated by {worst:.3e}")
    return {"verify.csv": out.getvalue(),
            "summary.json": json.dumps(summary, indent=1)}


def _run_walk(config: ExperimentConfig, incidents: list) -> dict:
    config.require("h", "r_max")
    h = float(config.parameters["h"])
    r_max = int(config.parameters["r_max"])
    if not config.t_list:
        raise ValueError("walk runs need a non-empty t grid")
    artifacts = {}
    for i, t in enumerate(config.t_list):
        rows = walk_bound_gap(h, t, r_max)
        artifacts[f"walk_{i:03d}.csv"] = walk_table_csv(rows)
    return artifacts


def _run_circuit(config: ExperimentConfig, incidents: list) -> dict:
    config.require("L", "T", "samples")
    params = config.parameters
    length = int(params["L"])
    depth = int(params["T"])
    samples = int(params["samples"])
    initial = int(params.get("initial_site", length // 2))
    stats = run_spread(length, depth, initial, samples, config.seed,
                       workers=config.workers)
    cone = strict_cone_check(stats)
    if not cone.ok:
        incidents.append(f"strict-cone violations at {cone.violations[:5]}")
    summary = stats.summary_dict()
    summary["strict_cone_ok"] = cone.ok
    return {"spread.csv": stats.to_csv(),
            "summary.json": json.dumps(summary, indent=1)}


def _run_protocols(config: ExperimentConfig, incidents: list) -> dict:
    params = config.parameters
    ghz_ns = [int(n) for n in params.get("ghz_n", [2, 3, 4, 5, 6])]
    w_ns = [int(n) for n in params.get("w_n", [3, 4, 5, 6, 7, 8])]
    chain_n = int(params.get("transfer_chain", 4))
    rows = []
    for n in ghz_ns:
        _, fid = run_ghz_protocol(n)
        rows.append(("ghz_fidelity", n, fid))
    for n in w_ns:
        _, fid = run_w_protocol(n)
        rows.append(("w_fidelity", n, fid))
    u = swap_network(list(range(chain_n)), chain_n)
    rows.append(("transfer_commutator", chain_n,
                 state_transfer_commutator(u, 0, chain_n - 1, chain_n)))
    lines = ["quantity,n,value"]
    for q, n, v in rows:
        lines.append(f"{q},{n},{FLOAT_FMT % v}")
    return {"protocols.csv": "\n".join(lines) + "\n"}


_RUNNERS = {
    "bounds": _run_bounds,
    "exact_verify": _run_exact_verify,
    "walk": _run_walk,
    "circuit": _run_circuit,
    "protocols": _run_protocols,
}


def run(config: ExperimentConfig) -> dict:
    """Execute a validated config; returns {filename: path} of the artifacts.

    All artifact bytes are assembled before anything is written, then the
    manifest is written last.
    """
    start = time.perf_counter()
    incidents = []
    artifacts = _RUNNERS[config.kind](config, incidents)
    out_dir = Path(config.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = {}
    for name, text in artifacts.items():
        path = out_dir / name
        path.write_text(text)
        written[name] = str(path)
    manifest = {
        "config": config.to_dict(),
        "version": __version__,
        "wall_time_s": time.perf_counter() - start,
        "incidents": incidents,
        "artifacts": sorted(artifacts),
    }
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=1))
    written["manifest.json"] = str(out_dir / "manifest.json")
    return written


# -- artifact comparison --------------------------------------------------------


def _load_cells(path: Path):
    """Numeric cells of a CSV or JSON artifact, keyed for stable comparison."""
    text = path.read_text()
    cells = {}
    if path.suffix == ".json":
        def flatten(prefix, obj):
            if isinstance(obj, dict):
                for k, v in sorted(obj.items()):
                    flatten(f"{prefix}/{k}", v)
            elif isinstance(obj, list):
                for i, v in enumerate(obj):
                    flatten(f"{prefix}[{i}]", v)
            elif isinstance(obj, (int, float)) and not isinstance(obj, bool):
                cells[prefix] = float(obj)
        flatten("", json.loads(text))
        return cells, "json"
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    for row_idx, row in enumerate(reader):
        for col, value in zip(header, row):
            try:
                cells[f"{row_idx}/{col}"] = float(value)
            except ValueError:
                cells[f"{row_idx}/{col}"] = value
    return cells, tuple(header)


@dataclass
class CompareReport:
    ok: bool
    max_diff: float
    cells: int
    mismatched_keys: list = field(default_factory=list)

    def to_json_dict(self):
        return {"pass": self.ok, "max_diff": self.max_diff, "cells": self.cells,
                "mismatched_keys": self.mismatched_keys[:20]}


def compare(path_a, path_b, tolerance: float) -> CompareReport:
    """Cell-wise comparison of two artifacts sharing a schema."""
    path_a, path_b = Path(path_a), Path(path_b)
    for p in (path_a, path_b):
        if not p.exists():
            raise ValueError(f"artifact {p} does not exist")
    cells_a, schema_a = _load_cells(path_a)
    cells_b, schema_b = _load_cells(path_b)
    if schema_a != schema_b or set(cells_a) != set(cells_b):
        raise ValueError("artifacts do not share a schema")
    max_diff = 0.0
    mismatched = []
    for key, va in cells_a.items():
        vb = cells_b[key]
        if isinstance(va, str) or isinstance(vb, str):
            if va != vb:
                mismatched.append(key)
                max_diff = math.inf
            continue
        d = abs(va - vb)
        if d > max_diff:
            max_diff = d
        if d > tolerance:
            mismatched.append(key)
    return CompareReport(max_diff <= tolerance, max_diff, len(cells_a), mismatched)
