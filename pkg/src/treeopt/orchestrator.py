"""Two-phase population search: exploratory tree batch, then adaptive refinement.

A batch of trees seeded by Latin hypercube sampling explores globally under a
depth cap, each with its own window decay rate and an exploration constant
that jumps to a large value while the tree stagnates. The best candidates
then seed staged local trees with a negligible exploration constant and no
depth cap, whose root window is rescaled between stages from the observed
improvement; stagnating seeds decay geometrically and are pruned, always
keeping the best one.

Every tree runs on its own budget slice and random stream, split off before
any execution starts, so serial and threaded runs produce identical results.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .core import Budget, BudgetExhausted, Evaluator, Objective, denormalize
from .sampling import HypersphereSampler, RandomStream, lhs_sample
from .surrogate import LogisticSampler, SurrogateConfig
from .tree import Tree, TreeConfig, window_scale

_SQRT2 = math.sqrt(2.0)
_TARGET_TOL = 1e-12


@dataclass
class GlobalConfig:
    tree_count: int = 20
    a_range: tuple[float, float] = (0.05, 0.1)
    C_base: float = _SQRT2
    C_large: float = 1000.0 * _SQRT2
    max_depth: int = 10
    stagnation_threshold: int = 25
    iterations_per_tree: int | None = None  # None: resolved from budget_fraction
    budget_fraction: float = 0.3

    def __post_init__(self):
        if self.tree_count < 1:
            raise ValueError("tree_count must be at least 1")
        if self.C_large < 100.0 * self.C_base:
            raise ValueError("C_large must be at least 100x C_base")
        if not 0.0 < self.budget_fraction < 1.0:
            raise ValueError("budget_fraction must lie in (0, 1)")


@dataclass
class LocalConfig:
    seed_count: int = 5
    stages: int = 5
    iterations_per_stage: int | None = None  # None: resolved from remaining budget
    C_local: float = 1e-9
    alpha: float = 1.0
    epsilon: float = 1e-9
    delta: float = 0.7
    f_target: float | None = None  # None: objective's known minimum, else trailing

    def __post_init__(self):
        if not 0.0 < self.delta < 1.0:
            raise ValueError("delta must lie in (0, 1)")
        if self.epsilon <= 0.0:
            raise ValueError("epsilon must be positive")


@dataclass
class MctsConfig:
    """Full configuration of the tree-batch optimizer."""

    global_cfg: GlobalConfig = field(default_factory=GlobalConfig)
    local_cfg: LocalConfig = field(default_factory=LocalConfig)
    surrogate: SurrogateConfig = field(default_factory=SurrogateConfig)
    kernel: str = "logistic"  # "logistic" or "hypersphere"
    b: float = 0.5
    rollouts_per_expansion: int = 4
    workers: int = 1

    def __post_init__(self):
        if self.kernel not in ("logistic", "hypersphere"):
            raise ValueError(f"unknown kernel {self.kernel!r}")


@dataclass
class Candidate:
    """A tree's outcome: best point with its inherited scaling parameters."""

    point: np.ndarray  # unit cube
    value: float
    a: float
    window: float
    tree_index: int
    improved: bool = False


@dataclass
class RunResult:
    best_point: np.ndarray  # raw problem units
    best_value: float
    evals_used: int
    trace: list[tuple[int, float]]  # (eval index, best-so-far)
    census: list[tuple[str, int]]   # trees alive per phase
    metadata: dict


def adapt_window(b_prev: float, f_prev: float, f_curr: float, f_target: float,
                 alpha: float, epsilon: float, delta: float) -> float:
    """Between-stage window update.

    On strict improvement the window rescales by the improvement ratio
    ((f_prev - f_curr + eps) / (f_prev - f_target + eps))^alpha, which is the
    identity when the target is reached exactly; otherwise it decays by delta.
    """
    if f_curr < f_prev:
        ratio = (f_prev - f_curr + epsilon) / (f_prev - f_target + epsilon)
        return b_prev * ratio ** alpha
    return b_prev * delta


def select_top(candidates: list[Candidate], m: int) -> list[Candidate]:
    """The m lowest-value candidates (all of them when fewer exist)."""
    if m < 1:
        raise ValueError("m must be at least 1")
    ranked = sorted(candidates, key=lambda c: (c.value, c.tree_index))
    return ranked[:m]


def prune(seeds: list[Candidate]) -> list[Candidate]:
    """Drop seeds that failed to improve last stage; the best always survives."""
    if not seeds:
        raise ValueError("cannot prune an empty seed list")
    best = min(seeds, key=lambda s: (s.value, s.tree_index))
    kept = [s for s in seeds if s.improved or s is best]
    return sorted(kept, key=lambda s: (s.value, s.tree_index))


def _make_sampler(kernel: str, surrogate_cfg: SurrogateConfig):
    if kernel == "logistic":
        return LogisticSampler(surrogate_cfg)
    return HypersphereSampler()


def _run_tasks(tasks, workers: int):
    """Execute thunks, serially or on a thread pool; results keep task order."""
    if workers <= 1 or len(tasks) <= 1:
        return [task() for task in tasks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda t: t(), tasks))


def run_global_batch(objective: Objective, cfg: GlobalConfig, budget: Budget,
                     rng: RandomStream, *, mcts: MctsConfig,
                     log_points: bool = False):
    """Exploration phase. Returns (candidates, evaluators in merge order).

    Roots come from one Latin hypercube design; each tree draws its own decay
    rate from ``a_range`` and receives a pre-reserved budget slice, so trees
    are independent and may run concurrently.
    """
    dim = objective.space.dim
    iterations = cfg.iterations_per_tree
    if iterations is None:
        planned = int(cfg.budget_fraction * budget.max_evals)
        per_tree = max(0, planned // cfg.tree_count - 1)
        iterations = max(1, per_tree // mcts.rollouts_per_expansion)

    lhs_rng, a_rng = rng.split(2)
    roots = lhs_sample(cfg.tree_count, dim, lhs_rng)
    a_values = a_rng.uniform(cfg.a_range[0], cfg.a_range[1], size=cfg.tree_count)
    tree_rngs = rng.split(cfg.tree_count)
    # fund every root before any iteration allowance, so a tight budget still
    # evaluates the whole initial design
    grants = [0] * cfg.tree_count
    available = budget.remaining
    for i in range(cfg.tree_count):
        if available <= 0:
            break
        grants[i] += 1
        available -= 1
    per_tree = iterations * mcts.rollouts_per_expansion
    for i in range(cfg.tree_count):
        extra = min(per_tree, available)
        grants[i] += extra
        available -= extra
    slices = [budget.reserve(n) for n in grants]

    def make_task(index: int):
        def task():
            sampler_rng, noise_rng = tree_rngs[index].split(2)
            evaluator = Evaluator(objective, slices[index], noise_rng, log_points)
            try:
                root_value = evaluator(roots[index])
            except BudgetExhausted:
                return None, evaluator
            tree_cfg = TreeConfig(a=float(a_values[index]), b=mcts.b,
                                  exploration=cfg.C_base, max_depth=cfg.max_depth,
                                  rollouts_per_expansion=mcts.rollouts_per_expansion,
                                  stagnation_threshold=cfg.stagnation_threshold)
            tree = Tree(roots[index], root_value, tree_cfg,
                        _make_sampler(mcts.kernel, mcts.surrogate),
                        evaluator, sampler_rng)
            tree.run(iterations, c_base=cfg.C_base, c_large=cfg.C_large,
                     stagnation=cfg.stagnation_threshold)
            candidate = Candidate(tree.best_point, tree.best_value,
                                  float(a_values[index]),
                                  window_scale(tree.best_depth, float(a_values[index]), mcts.b),
                                  index)
            return candidate, evaluator
        return task

    outcomes = _run_tasks([make_task(i) for i in range(cfg.tree_count)], mcts.workers)
    candidates = []
    evaluators = []
    for (candidate, evaluator), slice_budget in zip(outcomes, slices):
        budget.absorb(slice_budget)
        evaluators.append(evaluator)
        if candidate is not None:
            candidates.append(candidate)
    return candidates, evaluators


def run_local_stage(seeds: list[Candidate], cfg: LocalConfig, objective: Objective,
                    budget: Budget, rng: RandomStream, *, mcts: MctsConfig,
                    quota_per_seed: int, f_target: float,
                    log_points: bool = False):
    """One refinement stage. Returns (updated seeds, evaluators in merge order).

    Each seed's best point roots a fresh unbounded-depth tree with a
    negligible exploration constant; afterwards its window is rescaled by
    ``adapt_window`` and its best point and value are refreshed.
    """
    if not seeds:
        raise ValueError("local stage requires at least one seed")
    seed_rngs = rng.split(len(seeds))
    slices = [budget.reserve(quota_per_seed) for _ in seeds]
    stagnation = mcts.global_cfg.stagnation_threshold

    def make_task(index: int):
        def task():
            seed = seeds[index]
            sampler_rng, noise_rng = seed_rngs[index].split(2)
            evaluator = Evaluator(objective, slices[index], noise_rng, log_points)
            tree_cfg = TreeConfig(a=seed.a, b=seed.window, exploration=cfg.C_local,
                                  max_depth=None,
                                  rollouts_per_expansion=mcts.rollouts_per_expansion,
                                  stagnation_threshold=stagnation,
                                  stall_walk="down")
            tree = Tree(seed.point, seed.value, tree_cfg,
                        _make_sampler(mcts.kernel, mcts.surrogate),
                        evaluator, sampler_rng)
            iterations = quota_per_seed // mcts.rollouts_per_expansion
            tree.run(max(0, iterations))
            return tree, evaluator
        return task

    outcomes = _run_tasks([make_task(i) for i in range(len(seeds))], mcts.workers)
    updated = []
    evaluators = []
    for seed, (tree, evaluator), slice_budget in zip(seeds, outcomes, slices):
        budget.absorb(slice_budget)
        evaluators.append(evaluator)
        f_curr = tree.best_value
        new_window = adapt_window(seed.window, seed.value, f_curr, f_target,
                                  cfg.alpha, cfg.epsilon, cfg.delta)
        new_window = min(new_window, 0.5)  # window never exceeds the root radius
        updated.append(Candidate(np.array(tree.best_point), f_curr, seed.a,
                                 new_window, seed.tree_index,
                                 improved=f_curr < seed.value))
    return updated, evaluators


def _resolved_metadata(mcts: MctsConfig, gcfg: GlobalConfig, lcfg: LocalConfig,
                       iterations_global: int, iterations_stage: int | None) -> dict:
    return {
        "kernel": mcts.kernel,
        "b": mcts.b,
        "rollouts_per_expansion": mcts.rollouts_per_expansion,
        "workers": mcts.workers,
        "global": {
            "tree_count": gcfg.tree_count,
            "a_range": list(gcfg.a_range),
            "C_base": gcfg.C_base,
            "C_large": gcfg.C_large,
            "max_depth": gcfg.max_depth,
            "stagnation_threshold": gcfg.stagnation_threshold,
            "iterations_per_tree": iterations_global,
            "budget_fraction": gcfg.budget_fraction,
        },
        "local": {
            "seed_count": lcfg.seed_count,
            "stages": lcfg.stages,
            "iterations_per_stage": iterations_stage,
            "C_local": lcfg.C_local,
            "alpha": lcfg.alpha,
            "epsilon": lcfg.epsilon,
            "delta": lcfg.delta,
            "f_target": lcfg.f_target,
        },
        "surrogate": {
            "bootstrap_count": mcts.surrogate.bootstrap_count,
            "retrain_period": mcts.surrogate.retrain_period,
            "rbf_count": mcts.surrogate.rbf_count,
            "hill_climb_iters": mcts.surrogate.hill_climb_iters,
            "learn_rate": mcts.surrogate.learn_rate,
            "train_iters": mcts.surrogate.train_iters,
            "l2": mcts.surrogate.l2,
            "history_window": mcts.surrogate.history_window,
            "cdf_grid": mcts.surrogate.cdf_grid,
        },
    }


def optimize(objective: Objective, budget: Budget, cfg: MctsConfig,
             rng: RandomStream, log_points: bool = False) -> RunResult:
    """Run the full global-then-local protocol and report the overall best.

    Stops early once the budget is spent or the best value sits within
    1e-12 of the configured target. The final stage splits whatever budget
    remains across the surviving seeds.
    """
    if budget.max_evals < 1:
        raise ValueError("budget must allow at least one evaluation")
    gcfg = cfg.global_cfg
    lcfg = cfg.local_cfg

    iterations_global = gcfg.iterations_per_tree
    if iterations_global is None:
        planned = int(gcfg.budget_fraction * budget.max_evals)
        per_tree = max(0, planned // gcfg.tree_count - 1)
        iterations_global = max(1, per_tree // cfg.rollouts_per_expansion)
    gcfg_resolved = replace(gcfg, iterations_per_tree=iterations_global)

    census: list[tuple[str, int]] = [("global", gcfg.tree_count)]
    global_rng, local_rng = rng.split(2)
    candidates, evaluators = run_global_batch(objective, gcfg_resolved, budget,
                                              global_rng, mcts=cfg,
                                              log_points=log_points)

    iterations_stage = lcfg.iterations_per_stage
    if iterations_stage is None and lcfg.stages > 0:
        per_stage = budget.remaining // max(1, lcfg.stages * lcfg.seed_count)
        iterations_stage = max(1, per_stage // cfg.rollouts_per_expansion)

    known_target = lcfg.f_target
    if known_target is None and objective.known_min is not None:
        known_target = float(objective.known_min)

    best_value = min((c.value for c in candidates), default=math.inf)

    def target_reached() -> bool:
        return known_target is not None and abs(best_value - known_target) <= _TARGET_TOL

    if candidates:
        seeds = select_top(candidates, lcfg.seed_count)
        stage_rngs = local_rng.split(lcfg.stages) if lcfg.stages > 0 else []
        for stage in range(1, lcfg.stages + 1):
            if budget.remaining < 1 or target_reached():
                break
            if stage == lcfg.stages:
                quota = budget.remaining // len(seeds)
            else:
                quota = iterations_stage * cfg.rollouts_per_expansion
            if known_target is not None:
                eff_target = min(known_target, best_value)
            else:
                # trailing target: 10% of the span the seed population is
                # currently contesting; measuring from initial designs instead
                # would let a penalty cliff dwarf every later improvement
                span = max(s.value for s in seeds) - min(s.value for s in seeds)
                if span <= 0.0:
                    span = 1e-3 * (abs(best_value) + 1.0)
                eff_target = best_value - 0.1 * span
            census.append((f"local_{stage}", len(seeds)))
            seeds, stage_evaluators = run_local_stage(
                seeds, lcfg, objective, budget, stage_rngs[stage - 1],
                mcts=cfg, quota_per_seed=quota, f_target=eff_target,
                log_points=log_points)
            evaluators.extend(stage_evaluators)
            best_value = min(best_value, min(s.value for s in seeds))
            seeds = prune(seeds)

    # deterministic merge: evaluators are already in phase order, tree order
    trace: list[tuple[int, float]] = []
    points: list[tuple[int, np.ndarray, float]] = []
    running = math.inf
    best_unit = None
    index = 0
    for evaluator in evaluators:
        for j, value in enumerate(evaluator.values):
            index += 1
            if value < running:
                running = value
            trace.append((index, running))
            if evaluator.points is not None:
                points.append((index, evaluator.points[j][0], value))
        if evaluator.best_unit is not None and (best_unit is None
                                                or evaluator.best_value < best_seen):
            best_seen = evaluator.best_value
            best_unit = evaluator.best_unit

    metadata = {"optimizer_config": _resolved_metadata(cfg, gcfg_resolved, lcfg,
                                                       iterations_global, iterations_stage)}
    result = RunResult(
        best_point=denormalize(best_unit, objective.space) if best_unit is not None else None,
        best_value=running,
        evals_used=budget.used,
        trace=trace,
        census=census,
        metadata=metadata,
    )
    if log_points:
        result.metadata["points"] = points
    return result
