"""Seedable random streams, Latin hypercube designs, and hypersphere proposals."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class RandomStream:
    """Deterministic random source with reproducible child streams.

    The same seed always yields the same draw sequence. ``split`` derives
    independent child streams; results depend only on the seed and the order
    of ``split`` calls, never on wall-clock or thread timing.
    """

    def __init__(self, seed):
        if isinstance(seed, np.random.SeedSequence):
            self._seq = seed
        else:
            self._seq = np.random.SeedSequence(int(seed))
        self.gen = np.random.Generator(np.random.PCG64(self._seq))

    @property
    def seed(self):
        return self._seq.entropy

    def split(self, count: int) -> list["RandomStream"]:
        return [RandomStream(child) for child in self._seq.spawn(count)]

    def uniform(self, low=0.0, high=1.0, size=None):
        return self.gen.uniform(low, high, size)

    def open_unit(self) -> float:
        """Uniform draw strictly inside (0, 1)."""
        u = self.gen.random()
        while u == 0.0:
            u = self.gen.random()
        return u


def lhs_sample(count: int, dim: int, rng: RandomStream) -> np.ndarray:
    """Latin hypercube design in the unit cube, shape (count, dim).

    Every coordinate gets exactly one sample in each of the ``count``
    equal-width strata, uniformly placed within its stratum.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    out = np.empty((count, dim))
    for j in range(dim):
        perm = rng.gen.permutation(count)
        out[:, j] = (perm + rng.gen.random(count)) / count
    return out


@dataclass
class HypersphereConfig:
    """Radius (in unit-cube units) and radial law of an isotropic proposal."""

    r_max: float
    mode: str = "volume"  # "volume": radii ~ r_max * xi^(1/d); "surface": fixed r_max

    def __post_init__(self):
        if self.r_max <= 0.0:
            raise ValueError("r_max must be positive")
        if self.mode not in ("volume", "surface"):
            raise ValueError(f"unknown mode {self.mode!r}")


def hypersphere_sample(center, cfg: HypersphereConfig, rng: RandomStream) -> np.ndarray:
    """Isotropic draw around ``center``, clipped into the unit cube.

    Volume mode scales the radius by xi^(1/d) so that (before clipping)
    points are uniform over the ball; surface mode pins the radius at r_max.
    """
    center = np.asarray(center, dtype=float)
    d = center.size
    direction = rng.gen.standard_normal(d)
    norm = np.linalg.norm(direction)
    while norm == 0.0:
        direction = rng.gen.standard_normal(d)
        norm = np.linalg.norm(direction)
    if cfg.mode == "volume":
        r = cfg.r_max * rng.open_unit() ** (1.0 / d)
    else:
        r = cfg.r_max
    return np.clip(center + r * direction / norm, 0.0, 1.0)


class HypersphereSampler:
    """Proposal kernel that always draws volume-uniform within the node window."""

    def propose(self, node, radius: float, rng: RandomStream) -> np.ndarray:
        return hypersphere_sample(node.point, HypersphereConfig(radius), rng)
