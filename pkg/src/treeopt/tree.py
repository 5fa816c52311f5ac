"""Tree search engine: UCB selection, windowed expansion, reward backpropagation.

Rewards are negated objective values, and a node's score aggregates by the
best reward seen anywhere in its subtree, so selection chases the deepest
improvement found so far. Proposal windows shrink with depth as
b * exp(-a * depth^2), moving each branch from coarse moves to refinement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import BudgetExhausted
from .surrogate import NodeSurrogate


def reward_of(value: float) -> float:
    """Minimization recast as reward maximization."""
    return -float(value)


def window_scale(depth: int, a: float, b: float) -> float:
    """Sampling radius at a given depth: b * exp(-a * depth^2)."""
    return b * math.exp(-a * depth * depth)


# deep chains shrink the window below float resolution; keep the sampling
# radius positive so proposal draws stay well-defined
_RADIUS_FLOOR = 1e-300


def ucb(node, parent_visits: int, exploration: float) -> float:
    """Best subtree reward plus the exploration bonus; unvisited nodes score inf."""
    if node.visits == 0:
        return math.inf
    return node.reward_best + exploration * math.sqrt(math.log(parent_visits) / node.visits)


class TreeNode:
    __slots__ = ("uid", "point", "value", "reward_best", "visits", "depth",
                 "children", "parent", "window_radius", "surrogate", "stale")

    def __init__(self, uid, point, value, depth, parent, window_radius):
        self.uid = uid
        self.point = np.asarray(point, dtype=float)
        self.value = float(value)
        self.reward_best = reward_of(value)
        self.visits = 0
        self.depth = depth
        self.children: list[TreeNode] = []
        self.parent = parent
        self.window_radius = window_radius
        self.surrogate = NodeSurrogate()
        self.stale = 0  # consecutive expansions in this subtree without a tree-best improvement

    @property
    def history(self):
        return self.surrogate.history


@dataclass
class TreeConfig:
    a: float                       # depth decay rate of the window
    b: float = 0.5                 # window radius at the root
    exploration: float = math.sqrt(2.0)
    max_depth: int | None = None
    rollouts_per_expansion: int = 4
    stagnation_threshold: int = 25  # stale expansions before a node yields its turn
    stall_walk: str = "up"          # where expansion moves when a node stagnates:
                                    # "up" widens shallower ancestors (capped-depth
                                    # exploration), "down" refines along the best
                                    # chain at ever-smaller windows (local drilling)

    def __post_init__(self):
        if self.a <= 0.0:
            raise ValueError("decay rate a must be positive")
        if not 0.0 < self.b <= 0.5:
            raise ValueError("initial window b must lie in (0, 0.5]")
        if self.rollouts_per_expansion < 1:
            raise ValueError("rollouts_per_expansion must be at least 1")
        if self.stall_walk not in ("up", "down"):
            raise ValueError(f"unknown stall_walk {self.stall_walk!r}")


class Tree:
    """One search tree over the unit cube.

    ``evaluate`` is a callable mapping a unit-cube vector to an objective
    value under budget accounting; ``sampler`` supplies proposals around a
    node within its window radius. All randomness flows through ``rng``.
    """

    def __init__(self, root_point, root_value, cfg: TreeConfig, sampler, evaluate, rng):
        self.cfg = cfg
        self.sampler = sampler
        self.evaluate = evaluate
        self.rng = rng
        self.exploration = cfg.exploration
        root = TreeNode(0, root_point, root_value, depth=0, parent=None,
                        window_radius=max(window_scale(0, cfg.a, cfg.b), _RADIUS_FLOOR))
        self.nodes: list[TreeNode] = [root]
        self.root = root
        self.best_value = root.value
        self.best_point = root.point.copy()
        self.best_depth = 0
        self.iters_since_improvement = 0

    def _expandable(self, node: TreeNode) -> bool:
        return self.cfg.max_depth is None or node.depth < self.cfg.max_depth

    def select(self) -> list[TreeNode]:
        """Root-to-leaf path following maximal UCB, first-created child on ties."""
        node = self.root
        path = [node]
        while node.children and self._expandable(node):
            best = None
            best_score = -math.inf
            for child in node.children:
                score = ucb(child, node.visits, self.exploration)
                if score > best_score:
                    best = child
                    best_score = score
            node = best
            path.append(node)
        return path

    def expand(self, node: TreeNode) -> TreeNode | None:
        """Run one rollout batch from ``node``; the best proposal becomes a child.

        Every rollout is evaluated and recorded in the node's history (labels
        mark improvement over the node's own value). Returns None when the
        node sits at the depth cap.
        """
        if not self._expandable(node):
            return None
        cfg = self.cfg
        radius = node.window_radius
        batch_best = math.inf
        batch_point = None
        for _ in range(cfg.rollouts_per_expansion):
            cand = self.sampler.propose(node, radius, self.rng)
            value = self.evaluate(cand)  # BudgetExhausted propagates to the caller
            node.surrogate.record(cand - node.point, value, value < node.value)
            if value < batch_best:
                batch_best = value
                batch_point = cand
            if value < self.best_value:
                self.best_value = value
                self.best_point = np.array(cand)
                self.best_depth = node.depth + 1
        child = TreeNode(len(self.nodes), batch_point, batch_best,
                         depth=node.depth + 1, parent=node,
                         window_radius=max(window_scale(node.depth + 1, cfg.a, cfg.b),
                                           _RADIUS_FLOOR))
        node.children.append(child)
        self.nodes.append(child)
        return child

    def backpropagate(self, path: list[TreeNode], reward: float) -> None:
        for node in path:
            node.visits += 1
            if reward > node.reward_best:
                node.reward_best = reward

    def grow_once(self) -> TreeNode | None:
        """One select/expand/backpropagate cycle.

        Expansion targets the deepest node on the selected path that holds the
        path's best value, so a promising node keeps accumulating rollouts
        (and surrogate refits) until it either improves, which deepens the
        branch and shrinks the window, or stagnates. A stagnated or
        depth-capped node yields its turn: with ``stall_walk="up"`` to the
        nearest eligible ancestor (the root always qualifies, which is how a
        capped tree widens), with ``"down"`` to its best-child chain, whose
        deeper nodes retry at ever-smaller windows.
        """
        path = self.select()
        best_on_path = min(node.value for node in path)
        i = max(j for j, node in enumerate(path) if node.value == best_on_path)
        threshold = self.cfg.stagnation_threshold
        if self.cfg.stall_walk == "down":
            while i < len(path) - 1 and (not self._expandable(path[i])
                                         or path[i].stale >= threshold):
                i += 1
        else:
            while i > 0 and (not self._expandable(path[i])
                             or path[i].stale >= threshold):
                i -= 1
        target = path[i]
        if not self._expandable(target):
            return None
        previous_best = self.best_value
        child = self.expand(target)
        touched = path[:i + 1] + [child]
        self.backpropagate(touched, reward_of(child.value))
        if self.best_value < previous_best:
            for node in touched:
                node.stale = 0
            self.iters_since_improvement = 0
        else:
            for node in path[:i + 1]:
                node.stale += 1
            self.iters_since_improvement += 1
        return child

    def run(self, iterations: int, c_base=None, c_large=None, stagnation=None) -> None:
        """Iterate until done or the budget slice is spent.

        When ``c_base``/``c_large`` are given, the exploration constant jumps
        to the large value after ``stagnation`` iterations without improvement
        and reverts as soon as the tree best improves.
        """
        for _ in range(iterations):
            if c_large is not None:
                stalled = self.iters_since_improvement >= stagnation
                self.exploration = c_large if stalled else c_base
            try:
                self.grow_once()
            except BudgetExhausted:
                return

    def dump_lines(self) -> list[str]:
        """Line-oriented dump (id, parent id, depth, value, visits) for inspection."""
        lines = []
        for node in self.nodes:
            parent_uid = node.parent.uid if node.parent is not None else -1
            lines.append(f"{node.uid}\t{parent_uid}\t{node.depth}\t{node.value:.17g}\t{node.visits}")
        return lines
