"""Baseline optimizers: uniform random search and particle swarm optimization.

Both run through the same budget accounting and unit-cube convention as the
tree optimizer, so comparisons happen at strictly equal evaluation counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Budget, BudgetExhausted, Evaluator, Objective, denormalize
from .orchestrator import RunResult
from .sampling import RandomStream


@dataclass
class PsoConfig:
    swarm_size: int = 30
    inertia: float = 0.729
    cognitive: float = 1.49445
    social: float = 1.49445
    v_max: float = 0.2  # velocity clamp, fraction of the (unit) range

    def __post_init__(self):
        if self.swarm_size < 2:
            raise ValueError("swarm_size must be at least 2")


def _finish(evaluator: Evaluator, objective: Objective, budget: Budget,
            metadata: dict, log_points: bool) -> RunResult:
    trace = []
    running = math.inf
    for i, value in enumerate(evaluator.values, start=1):
        if value < running:
            running = value
        trace.append((i, running))
    best_point = (denormalize(evaluator.best_unit, objective.space)
                  if evaluator.best_unit is not None else None)
    result = RunResult(best_point=best_point, best_value=running,
                       evals_used=budget.used, trace=trace,
                       census=[], metadata=metadata)
    if log_points:
        result.metadata["points"] = [(i + 1, unit, value)
                                     for i, (unit, value) in enumerate(evaluator.points)]
    return result


def random_search(objective: Objective, budget: Budget, rng: RandomStream,
                  log_points: bool = False) -> RunResult:
    """Uniform i.i.d. sampling over the bounds, tracking the best draw."""
    if budget.max_evals < 1:
        raise ValueError("budget must allow at least one evaluation")
    draw_rng, noise_rng = rng.split(2)
    evaluator = Evaluator(objective, budget, noise_rng, log_points)
    dim = objective.space.dim
    try:
        while True:
            evaluator(draw_rng.gen.random(dim))
    except BudgetExhausted:
        pass
    return _finish(evaluator, objective, budget,
                   {"optimizer_config": {"kind": "random"}}, log_points)


def pso_optimize(objective: Objective, budget: Budget, cfg: PsoConfig,
                 rng: RandomStream, log_points: bool = False) -> RunResult:
    """Inertia-weighted PSO with velocity clamping and position clipping."""
    if budget.max_evals < cfg.swarm_size:
        raise ValueError("budget must cover at least one full swarm evaluation")
    swarm_rng, noise_rng = rng.split(2)
    gen = swarm_rng.gen
    evaluator = Evaluator(objective, budget, noise_rng, log_points)
    dim = objective.space.dim
    n = cfg.swarm_size

    positions = gen.random((n, dim))
    velocities = gen.uniform(-cfg.v_max, cfg.v_max, (n, dim))
    pbest_pos = positions.copy()
    pbest_val = np.full(n, math.inf)
    gbest_pos = None
    gbest_val = math.inf

    try:
        for i in range(n):
            value = evaluator(positions[i])
            pbest_val[i] = value
            if value < gbest_val:
                gbest_val = value
                gbest_pos = positions[i].copy()
        while True:
            r1 = gen.random((n, dim))
            r2 = gen.random((n, dim))
            velocities = (cfg.inertia * velocities
                          + cfg.cognitive * r1 * (pbest_pos - positions)
                          + cfg.social * r2 * (gbest_pos - positions))
            np.clip(velocities, -cfg.v_max, cfg.v_max, out=velocities)
            positions = np.clip(positions + velocities, 0.0, 1.0)
            for i in range(n):
                value = evaluator(positions[i])
                if value < pbest_val[i]:
                    pbest_val[i] = value
                    pbest_pos[i] = positions[i].copy()
                    if value < gbest_val:
                        gbest_val = value
                        gbest_pos = positions[i].copy()
    except BudgetExhausted:
        pass

    metadata = {"optimizer_config": {
        "kind": "pso",
        "swarm_size": cfg.swarm_size,
        "inertia": cfg.inertia,
        "cognitive": cfg.cognitive,
        "social": cfg.social,
        "v_max": cfg.v_max,
    }}
    return _finish(evaluator, objective, budget, metadata, log_points)
