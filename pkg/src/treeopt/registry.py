"""String-addressable registries of problems and optimizers for the harness."""

from __future__ import annotations

import dataclasses

from .baselines import PsoConfig, pso_optimize, random_search
from .benchmarks import BENCHMARKS, make_benchmark
from .core import Budget, Objective
from .design import DEFAULT_PENALTY, make_pressure_vessel, make_welded_beam
from .orchestrator import (GlobalConfig, LocalConfig, MctsConfig, RunResult,
                           optimize)
from .sampling import RandomStream
from .surrogate import SurrogateConfig

DESIGN_PROBLEMS = ("welded_beam", "pressure_vessel")


class ConfigError(Exception):
    """Raised for unknown ids or malformed configuration values."""


def problem_ids() -> list[str]:
    return list(BENCHMARKS) + list(DESIGN_PROBLEMS)


def optimizer_ids() -> list[str]:
    return ["mcts_logistic", "mcts_hypersphere", "pso", "random"]


def make_problem(pid: str, overrides: dict | None = None) -> Objective:
    """Build a problem by id. Overrides: ``dim`` (scalable benchmarks only)
    and ``penalty`` (design problems only)."""
    overrides = dict(overrides or {})
    try:
        if pid == "welded_beam":
            return make_welded_beam(float(overrides.pop("penalty", DEFAULT_PENALTY)))
        if pid == "pressure_vessel":
            return make_pressure_vessel(float(overrides.pop("penalty", DEFAULT_PENALTY)))
        if pid in BENCHMARKS:
            dim = overrides.pop("dim", None)
            objective = make_benchmark(pid, int(dim) if dim is not None else None)
        else:
            raise ConfigError(f"unknown problem {pid!r}; valid ids: {', '.join(problem_ids())}")
    except (KeyError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    if overrides:
        raise ConfigError(f"unknown problem overrides for {pid}: {sorted(overrides)}")
    return objective


def problem_info(pid: str) -> dict:
    """Registry metadata echoed into harness output."""
    objective = make_problem(pid)
    info = {
        "dim": objective.space.dim,
        "lower": objective.space.lower.tolist(),
        "upper": objective.space.upper.tolist(),
        "known_min": objective.known_min,
        "noisy": objective.noisy,
    }
    if pid in DESIGN_PROBLEMS:
        info["penalty"] = DEFAULT_PENALTY
    return info


def _coerce(value, target_type):
    if target_type is bool and isinstance(value, str):
        if value.lower() in ("true", "1", "yes"):
            return True
        if value.lower() in ("false", "0", "no"):
            return False
        raise ValueError(f"not a boolean: {value!r}")
    if target_type in (int, float):
        return target_type(value)
    if target_type is tuple and isinstance(value, str):
        return tuple(float(part) for part in value.split(":"))
    return value


def _apply_overrides(instances: list, overrides: dict):
    """Assign flat override keys onto whichever dataclass declares the field."""
    remaining = dict(overrides)
    resolved = []
    for instance in instances:
        fields = {f.name: f for f in dataclasses.fields(instance)}
        updates = {}
        for key in list(remaining):
            if key in fields:
                raw = remaining.pop(key)
                base = type(getattr(instance, key)) if getattr(instance, key) is not None else None
                target = base if base in (int, float, bool, tuple) else None
                if target is None:
                    hint = str(fields[key].type)
                    target = int if "int" in hint else float if "float" in hint else None
                try:
                    updates[key] = _coerce(raw, target) if target else raw
                except ValueError as exc:
                    raise ConfigError(f"bad value for {key}: {exc}") from exc
        resolved.append(dataclasses.replace(instance, **updates) if updates else instance)
    if remaining:
        raise ConfigError(f"unknown optimizer overrides: {sorted(remaining)}")
    return resolved


def _mcts_config(kernel: str, overrides: dict) -> MctsConfig:
    overrides = dict(overrides)
    top = {}
    for key in ("b", "rollouts_per_expansion", "workers"):
        if key in overrides:
            top[key] = _coerce(overrides.pop(key), int if key != "b" else float)
    gcfg, lcfg, scfg = _apply_overrides(
        [GlobalConfig(), LocalConfig(), SurrogateConfig()], overrides)
    try:
        return MctsConfig(global_cfg=gcfg, local_cfg=lcfg, surrogate=scfg,
                          kernel=kernel, **top)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def run_optimizer(oid: str, objective: Objective, max_evals: int, seed,
                  overrides: dict | None = None, log_points: bool = False) -> RunResult:
    """Run a registered optimizer on an objective at a fixed budget and seed."""
    overrides = dict(overrides or {})
    budget = Budget(int(max_evals))
    rng = RandomStream(seed)
    if oid in ("mcts_logistic", "mcts_hypersphere"):
        kernel = "logistic" if oid == "mcts_logistic" else "hypersphere"
        cfg = _mcts_config(kernel, overrides)
        result = optimize(objective, budget, cfg, rng, log_points)
    elif oid == "random":
        if overrides:
            raise ConfigError(f"random search takes no overrides, got {sorted(overrides)}")
        result = random_search(objective, budget, rng, log_points)
    elif oid == "pso":
        cfg, = _apply_overrides([PsoConfig()], overrides)
        try:
            result = pso_optimize(objective, budget, cfg, rng, log_points)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    else:
        raise ConfigError(f"unknown optimizer {oid!r}; valid ids: {', '.join(optimizer_ids())}")
    result.metadata["optimizer"] = oid
    result.metadata["budget"] = int(max_evals)
    return result


def resolved_optimizer_config(oid: str, overrides: dict | None = None) -> dict:
    """The full configuration an optimizer would run with (for metadata)."""
    overrides = dict(overrides or {})
    if oid in ("mcts_logistic", "mcts_hypersphere"):
        kernel = "logistic" if oid == "mcts_logistic" else "hypersphere"
        cfg = _mcts_config(kernel, overrides)
        return {
            "kernel": cfg.kernel,
            "b": cfg.b,
            "rollouts_per_expansion": cfg.rollouts_per_expansion,
            "workers": cfg.workers,
            "global": dataclasses.asdict(cfg.global_cfg),
            "local": dataclasses.asdict(cfg.local_cfg),
            "surrogate": dataclasses.asdict(cfg.surrogate),
        }
    if oid == "random":
        return {"kind": "random"}
    if oid == "pso":
        cfg, = _apply_overrides([PsoConfig()], overrides)
        return dataclasses.asdict(cfg)
    raise ConfigError(f"unknown optimizer {oid!r}; valid ids: {', '.join(optimizer_ids())}")
