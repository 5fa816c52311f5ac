"""Experiment runner: seeded multi-trial sweeps over (problem x optimizer).

A run spec is a flat key = value text file (lists comma-separated, dotted
keys for per-optimizer and per-problem overrides). Every trial derives its
seed from a stable hash of (master seed, problem id, optimizer id, trial
index), so adding a problem or optimizer to a sweep never perturbs the
random streams of the others, and identical specs produce byte-identical
output files.
"""

from __future__ import annotations

import hashlib
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .orchestrator import RunResult
from .registry import (ConfigError, make_problem, optimizer_ids, problem_info,
                       resolved_optimizer_config, run_optimizer)

_TOP_KEYS = ("problems", "optimizers", "trials", "budget", "seed", "out",
             "log_points", "workers")


@dataclass
class ExperimentSpec:
    problems: list[str]
    optimizers: list[str]
    trials: int = 1
    budget: int = 10000
    master_seed: int = 0
    out_dir: str | None = None
    log_points: bool = False
    workers: int = 1
    optimizer_overrides: dict[str, dict] = field(default_factory=dict)
    problem_overrides: dict[str, dict] = field(default_factory=dict)

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        if self.budget < 1:
            raise ConfigError("budget must be at least 1")
        if not self.problems or not self.optimizers:
            raise ConfigError("spec needs at least one problem and one optimizer")


@dataclass
class SummaryRow:
    problem: str
    optimizer: str
    ave: float
    std: float
    best: float
    evals: int


@dataclass
class ExperimentResult:
    rows: list[SummaryRow]
    results: dict[tuple[str, str, int], RunResult]
    metadata: dict


def _parse_bool(raw: str) -> bool:
    if raw.lower() in ("true", "1", "yes"):
        return True
    if raw.lower() in ("false", "0", "no"):
        return False
    raise ConfigError(f"not a boolean: {raw!r}")


def parse_spec_text(text: str) -> ExperimentSpec:
    values: dict = {}
    optimizer_overrides: dict[str, dict] = {}
    problem_overrides: dict[str, dict] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {line!r}")
        key, raw = (part.strip() for part in line.split("=", 1))
        if "." in key:
            scope, _, attr = key.partition(".")
            if scope == "problem":
                pid, _, attr = attr.partition(".")
                if not pid or not attr:
                    raise ConfigError(f"line {lineno}: expected problem.<id>.<key>")
                problem_overrides.setdefault(pid, {})[attr] = raw
            else:
                optimizer_overrides.setdefault(scope, {})[attr] = raw
        elif key in _TOP_KEYS:
            values[key] = raw
        else:
            raise ConfigError(f"line {lineno}: unknown key {key!r}; "
                              f"valid keys: {', '.join(_TOP_KEYS)}")
    try:
        spec = ExperimentSpec(
            problems=[p.strip() for p in values.get("problems", "").split(",") if p.strip()],
            optimizers=[o.strip() for o in values.get("optimizers", "").split(",") if o.strip()],
            trials=int(values.get("trials", 1)),
            budget=int(values.get("budget", 10000)),
            master_seed=int(values.get("seed", 0)),
            out_dir=values.get("out"),
            log_points=_parse_bool(values.get("log_points", "false")),
            workers=int(values.get("workers", 1)),
            optimizer_overrides=optimizer_overrides,
            problem_overrides=problem_overrides,
        )
    except ValueError as exc:
        raise ConfigError(f"bad spec value: {exc}") from exc
    return spec


def parse_spec_file(path) -> ExperimentSpec:
    return parse_spec_text(Path(path).read_text())


def trial_seed(master_seed: int, problem: str, optimizer: str, trial: int) -> int:
    """Stable 64-bit seed for one trial, independent of the rest of the sweep."""
    key = f"{master_seed}|{problem}|{optimizer}|{trial}".encode()
    return int.from_bytes(hashlib.sha256(key).digest()[:8], "big")


def _validate(spec: ExperimentSpec) -> dict:
    """Resolve every id and override before any compute; returns metadata."""
    problems = {}
    for pid in spec.problems:
        make_problem(pid, spec.problem_overrides.get(pid))
        problems[pid] = problem_info(pid)
        problems[pid].update(spec.problem_overrides.get(pid, {}))
    optimizers = {}
    for oid in spec.optimizers:
        if oid not in optimizer_ids():
            raise ConfigError(f"unknown optimizer {oid!r}; valid ids: "
                              f"{', '.join(optimizer_ids())}")
        optimizers[oid] = resolved_optimizer_config(oid, spec.optimizer_overrides.get(oid))
    return {
        "spec": {
            "problems": spec.problems,
            "optimizers": spec.optimizers,
            "trials": spec.trials,
            "budget": spec.budget,
            "seed": spec.master_seed,
            "log_points": spec.log_points,
            "workers": spec.workers,
        },
        "problems": problems,
        "optimizers": optimizers,
    }


def run_experiment(spec: ExperimentSpec) -> ExperimentResult:
    """Run the sweep, write output files when an output directory is set."""
    metadata = _validate(spec)
    out_dir = None
    if spec.out_dir is not None:
        out_dir = Path(spec.out_dir)
        (out_dir / "traces").mkdir(parents=True, exist_ok=True)

    tasks = [(pid, oid, t)
             for pid in spec.problems
             for oid in spec.optimizers
             for t in range(spec.trials)]

    def run_one(task):
        pid, oid, t = task
        objective = make_problem(pid, spec.problem_overrides.get(pid))
        seed = trial_seed(spec.master_seed, pid, oid, t)
        return run_optimizer(oid, objective, spec.budget, seed,
                             spec.optimizer_overrides.get(oid), spec.log_points)

    if spec.workers > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=spec.workers) as pool:
            outcomes = list(pool.map(run_one, tasks))
    else:
        outcomes = [run_one(task) for task in tasks]
    results = dict(zip(tasks, outcomes))

    rows = []
    for pid in spec.problems:
        for oid in spec.optimizers:
            finals = [results[(pid, oid, t)].best_value for t in range(spec.trials)]
            ave = float(np.mean(finals))
            std = float(np.std(finals, ddof=1)) if len(finals) > 1 else 0.0
            rows.append(SummaryRow(problem=pid, optimizer=oid, ave=ave, std=std,
                                   best=float(min(finals)), evals=spec.budget))

    if out_dir is not None:
        (out_dir / "summary.csv").write_text(emit_summary(rows, "csv"))
        (out_dir / "summary.json").write_text(emit_summary(rows, "json"))
        (out_dir / "metadata.json").write_text(
            json.dumps(metadata, sort_keys=True, indent=2) + "\n")
        for (pid, oid, t), result in results.items():
            stem = f"{pid}_{oid}_{t}"
            (out_dir / "traces" / f"{stem}.tsv").write_text(emit_trace(result))
            if spec.log_points:
                (out_dir / "traces" / f"{stem}_points.tsv").write_text(emit_points(result))

    return ExperimentResult(rows=rows, results=results, metadata=metadata)


def emit_summary(rows: list[SummaryRow], fmt: str) -> str:
    """Serialize summary rows; csv/json keep full precision, text rounds to
    6 significant digits."""
    if not rows:
        raise ValueError("no rows to emit")
    if fmt == "csv":
        lines = ["problem,optimizer,ave,std,best,evals"]
        for r in rows:
            lines.append(f"{r.problem},{r.optimizer},{r.ave!r},{r.std!r},{r.best!r},{r.evals}")
        return "\n".join(lines) + "\n"
    if fmt == "json":
        payload = [{"problem": r.problem, "optimizer": r.optimizer, "ave": r.ave,
                    "std": r.std, "best": r.best, "evals": r.evals} for r in rows]
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if fmt == "text":
        header = ["problem", "optimizer", "ave", "std", "best", "evals"]
        table = [header] + [[r.problem, r.optimizer, f"{r.ave:.6g}", f"{r.std:.6g}",
                             f"{r.best:.6g}", str(r.evals)] for r in rows]
        widths = [max(len(row[i]) for row in table) for i in range(len(header))]
        lines = ["  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip()
                 for row in table]
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown summary format {fmt!r}")


def emit_trace(result: RunResult) -> str:
    """Two-column (eval index, best-so-far) text block."""
    return "".join(f"{i}\t{best!r}\n" for i, best in result.trace)


def emit_points(result: RunResult) -> str:
    """Sampled-point log: eval index, normalized coordinates, raw value."""
    points = result.metadata.get("points", [])
    lines = []
    for index, unit, value in points:
        coords = ",".join(repr(float(c)) for c in unit)
        lines.append(f"{index}\t{coords}\t{value!r}\n")
    return "".join(lines)
