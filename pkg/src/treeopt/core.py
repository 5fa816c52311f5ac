"""Search-space geometry, objective wrappers, and evaluation-budget accounting.

Raw design points are plain 1-D float arrays. All search logic elsewhere in
the package operates on the normalized unit cube [0, 1]^d; raw coordinates
appear only here, at the evaluation boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class BudgetExhausted(Exception):
    """Signals that the evaluation allowance is spent; searches must stop cleanly."""


class SearchSpace:
    """Axis-aligned box of raw coordinates."""

    def __init__(self, lower, upper):
        self.lower = np.asarray(lower, dtype=float)
        self.upper = np.asarray(upper, dtype=float)
        if self.lower.ndim != 1 or self.lower.shape != self.upper.shape:
            raise ValueError("lower and upper must be 1-D vectors of equal length")
        if self.lower.size < 1:
            raise ValueError("dimension must be at least 1")
        if not np.all(self.lower < self.upper):
            raise ValueError("each lower bound must be strictly below its upper bound")
        self.span = self.upper - self.lower

    @property
    def dim(self) -> int:
        return self.lower.size

    @classmethod
    def symmetric(cls, dim: int, half_width: float) -> "SearchSpace":
        """[-half_width, half_width] in every coordinate."""
        return cls(np.full(dim, -half_width), np.full(dim, half_width))

    @classmethod
    def box(cls, dim: int, lo: float, hi: float) -> "SearchSpace":
        return cls(np.full(dim, lo), np.full(dim, hi))

    def __repr__(self):
        return f"SearchSpace(dim={self.dim})"


def normalize(point, space: SearchSpace) -> np.ndarray:
    """Map a raw point to unit-cube coordinates."""
    p = np.asarray(point, dtype=float)
    if p.shape != (space.dim,):
        raise ValueError(f"point has shape {p.shape}, expected ({space.dim},)")
    return (p - space.lower) / space.span


def denormalize(unit, space: SearchSpace) -> np.ndarray:
    """Map unit-cube coordinates back to raw units. Inverse of normalize."""
    v = np.asarray(unit, dtype=float)
    if v.shape != (space.dim,):
        raise ValueError(f"vector has shape {v.shape}, expected ({space.dim},)")
    if np.any(v < 0.0) or np.any(v > 1.0):
        raise ValueError("unit-cube coordinates must lie in [0, 1]")
    return space.lower + v * space.span


def clamp(unit) -> np.ndarray:
    """Clip a vector into the unit cube, componentwise."""
    return np.clip(np.asarray(unit, dtype=float), 0.0, 1.0)


class Objective:
    """A scalar function to minimize over a SearchSpace.

    ``fn`` takes a raw point; stochastic objectives (``noisy=True``) take an
    extra unit-uniform draw that must be injected by the caller, which keeps
    evaluation pure and reproducible. ``known_min`` is the published optimum
    when one exists.
    """

    def __init__(self, space: SearchSpace, fn, known_min=None, noisy=False, name=""):
        self.space = space
        self.fn = fn
        self.known_min = known_min
        self.noisy = noisy
        self.name = name

    def evaluate(self, point, noise=None) -> float:
        p = np.asarray(point, dtype=float)
        if p.shape != (self.space.dim,):
            raise ValueError(f"point has shape {p.shape}, expected ({self.space.dim},)")
        if self.noisy:
            if noise is None:
                raise ValueError(f"objective {self.name!r} requires an injected noise draw")
            return float(self.fn(p, noise))
        return float(self.fn(p))

    def __repr__(self):
        return f"Objective({self.name or 'anonymous'}, dim={self.space.dim})"


@dataclass
class Budget:
    """Evaluation allowance. ``used`` increments by exactly one per objective call.

    ``reserve``/``absorb`` carve out child allowances so concurrent searches can
    run on disjoint slices and still reconcile to a single audited count.
    """

    max_evals: int
    used: int = 0
    reserved: int = 0

    def __post_init__(self):
        if self.max_evals < 0:
            raise ValueError("max_evals must be non-negative")

    @property
    def remaining(self) -> int:
        return self.max_evals - self.used - self.reserved

    @property
    def exhausted(self) -> bool:
        return self.used >= self.max_evals

    def reserve(self, count: int) -> "Budget":
        grant = max(0, min(int(count), self.remaining))
        self.reserved += grant
        return Budget(grant)

    def absorb(self, child: "Budget") -> None:
        self.reserved -= child.max_evals
        self.used += child.used


def evaluate_counted(objective: Objective, point, budget: Budget, noise=None) -> float:
    """Evaluate under budget accounting; raises BudgetExhausted when spent."""
    if budget.used >= budget.max_evals:
        raise BudgetExhausted(f"evaluation budget of {budget.max_evals} exhausted")
    value = objective.evaluate(point, noise)
    budget.used += 1
    return value


class Evaluator:
    """Budget-counted objective calls on unit-cube points.

    Records the raw value of every call (for traces) and tracks the best
    point seen. ``noise_rng`` supplies the per-call uniform draw for noisy
    objectives; anything with a ``uniform()`` method works.
    """

    def __init__(self, objective: Objective, budget: Budget, noise_rng=None, log_points=False):
        self.objective = objective
        self.budget = budget
        self.noise_rng = noise_rng
        self.values: list[float] = []
        self.points: list[tuple[np.ndarray, float]] | None = [] if log_points else None
        self.best_value = math.inf
        self.best_unit: np.ndarray | None = None

    def __call__(self, unit) -> float:
        noise = None
        if self.objective.noisy:
            if self.noise_rng is None:
                raise ValueError("noisy objective needs an evaluator noise stream")
            noise = self.noise_rng.uniform()
        raw = denormalize(unit, self.objective.space)
        value = evaluate_counted(self.objective, raw, self.budget, noise)
        self.values.append(value)
        if self.points is not None:
            self.points.append((np.array(unit, dtype=float), value))
        if value < self.best_value:
            self.best_value = value
            self.best_unit = np.array(unit, dtype=float)
        return value
