"""Success-driven directional sampling.

Each tree node keeps a history of trial displacements labeled by whether they
improved on the node's own value. Two small logistic models are fit on that
history: one over displacement sign patterns (which way to go) and one over
RBF-featurized step lengths (how far to go). Proposals combine a hill-climbed
direction with a step length drawn by inverting the numerically integrated
success-probability curve. Until enough history exists, a fixed heuristic
bootstrap schedule is used instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .sampling import HypersphereConfig, RandomStream, hypersphere_sample

_DUPLICATE_EPS = 1e-12


@dataclass
class SurrogateConfig:
    bootstrap_count: int = 8       # trials per node before models are consulted
    retrain_period: int = 5        # refit models every this many node trials
    rbf_count: int = 8             # Gaussian bumps spanning (0, R_max]
    hill_climb_iters: int | None = None  # None resolves to 10 * dim
    learn_rate: float = 0.1
    train_iters: int = 200
    l2: float = 1e-3
    history_window: int = 128      # most recent trials used for fitting; 0 = all
    cdf_grid: int = 256            # points in the tabulated step-length CDF

    def __post_init__(self):
        if self.bootstrap_count < 3:
            raise ValueError("bootstrap_count must be at least 3")
        if self.retrain_period < 1:
            raise ValueError("retrain_period must be at least 1")
        if self.rbf_count < 3:
            raise ValueError("rbf_count must be at least 3")


class TrialHistory:
    """Per-node record of proposed displacements and their outcomes."""

    __slots__ = ("deltas", "rs", "outcomes", "labels")

    def __init__(self):
        self.deltas: list[np.ndarray] = []
        self.rs: list[float] = []
        self.outcomes: list[float] = []
        self.labels: list[int] = []

    def append(self, delta: np.ndarray, outcome: float, label: bool) -> None:
        self.deltas.append(np.asarray(delta, dtype=float))
        self.rs.append(float(np.linalg.norm(delta)))
        self.outcomes.append(float(outcome))
        self.labels.append(1 if label else 0)

    def __len__(self) -> int:
        return len(self.deltas)

    def recent(self, window: int):
        """Last ``window`` entries as arrays (all entries when window <= 0)."""
        lo = -window if window > 0 else 0
        deltas = np.array(self.deltas[lo:]) if lo else np.array(self.deltas)
        rs = np.array(self.rs[lo:]) if lo else np.array(self.rs)
        labels = np.array(self.labels[lo:]) if lo else np.array(self.labels)
        return deltas, rs, labels


@dataclass
class LogisticModel:
    weights: np.ndarray
    bias: float
    informative: bool = True


@dataclass
class DistanceModel(LogisticModel):
    centers: np.ndarray = field(default_factory=lambda: np.array([]))


def direction_features(delta) -> np.ndarray:
    """Componentwise sign pattern of a displacement."""
    return np.sign(np.asarray(delta, dtype=float))


def rbf_centers(r_max: float, count: int) -> np.ndarray:
    """``count`` centers evenly spaced on (0, r_max]."""
    return np.linspace(r_max / count, r_max, count)


def rbf_features(r, centers) -> np.ndarray:
    """Gaussian bumps exp(-(r - c_k)^2); rows per r when r is a vector."""
    r = np.asarray(r, dtype=float)
    if r.ndim == 0:
        return np.exp(-((r - centers) ** 2))
    return np.exp(-((r[:, None] - centers[None, :]) ** 2))


def _sigmoid(z):
    with np.errstate(over="ignore"):
        return 1.0 / (1.0 + np.exp(-z))


def logistic_loss(weights, bias, features, labels, l2: float) -> float:
    """Mean cross-entropy plus (l2/2)||w||^2, numerically stable in both tails."""
    z = features @ weights + bias
    return float(np.mean(np.logaddexp(0.0, z) - labels * z) + 0.5 * l2 * np.dot(weights, weights))


def logistic_grad(weights, bias, features, labels, l2: float):
    """Analytic gradient of ``logistic_loss`` in (weights, bias)."""
    err = _sigmoid(features @ weights + bias) - labels
    grad_w = features.T @ err / len(labels) + l2 * weights
    grad_b = float(np.mean(err))
    return grad_w, grad_b


def train_logistic(features, labels, cfg: SurrogateConfig, record_loss=False):
    """Full-batch gradient descent on the regularized logistic loss.

    The step size is the configured rate capped by the curvature bound
    1 / (max_i ||x_i||^2 / 4 + l2), which keeps the loss non-increasing at
    every iteration. A single-class history yields an uninformative model.

    Returns (weights, bias, informative) and, when ``record_loss`` is set,
    the per-iteration loss sequence as a fourth element.
    """
    features = np.asarray(features, dtype=float)
    labels = np.asarray(labels, dtype=float)
    n, d = features.shape
    if labels.min() == labels.max():
        out = (np.zeros(d), 0.0, False)
        return out + ([],) if record_loss else out
    lipschitz = float(np.einsum("ij,ij->i", features, features).max()) / 4.0 + cfg.l2
    step = min(cfg.learn_rate, 1.0 / lipschitz)
    transpose = np.ascontiguousarray(features.T)
    shrink = 1.0 - step * cfg.l2
    scale = step / n
    w = np.zeros(d)
    b = 0.0
    losses = []
    with np.errstate(over="ignore"):
        for _ in range(cfg.train_iters):
            if record_loss:
                losses.append(logistic_loss(w, b, features, labels, cfg.l2))
            z = features @ w
            z += b
            np.negative(z, out=z)
            np.exp(z, out=z)
            z += 1.0
            np.reciprocal(z, out=z)  # sigmoid(X w + b)
            z -= labels              # now the residual
            grad = transpose @ z
            w *= shrink
            grad *= scale
            w -= grad
            b -= scale * float(np.add.reduce(z))
    if record_loss:
        losses.append(logistic_loss(w, b, features, labels, cfg.l2))
        return w, b, True, losses
    return w, b, True


def optimize_direction(model: LogisticModel, rng: RandomStream, iters: int) -> np.ndarray:
    """Stochastic hill climb over sign vectors in {-1,+1}^d.

    Starts from the signs of the learned weights (zeros broken to +1) and
    keeps a random single-coordinate flip only when it strictly raises the
    predicted success probability, so the result never scores below the
    starting direction.
    """
    w = model.weights
    u = np.where(w < 0.0, -1.0, 1.0)
    if iters > 0:
        flips = rng.gen.integers(0, w.size, size=iters)
        weights = w.tolist()
        signs = u.tolist()
        for j in flips:
            # flipping coordinate j changes w.u by -2 w_j u_j
            if weights[j] * signs[j] < 0.0:
                signs[j] = -signs[j]
        u = np.asarray(signs)
    return u


def distance_cdf(model: DistanceModel, r_max: float, grid_points: int = 256):
    """Tabulated CDF of the unnormalized success probability over [0, r_max].

    Composite trapezoid on a fixed grid; the integrand sigma(w.phi(r) + b)
    is positive, so the table is non-decreasing with CDF(0) = 0.

    Returns (grid, cdf) arrays of equal length.
    """
    grid = np.linspace(0.0, r_max, grid_points)
    probs = _sigmoid(rbf_features(grid, model.centers) @ model.weights + model.bias)
    widths = np.diff(grid)
    cdf = np.concatenate(([0.0], np.cumsum(0.5 * (probs[1:] + probs[:-1]) * widths)))
    return grid, cdf


def _inverse_step(grid, cdf, r_max: float, rng: RandomStream) -> float:
    """Draw a step length in (0, r_max] by inverting a tabulated CDF."""
    total = float(cdf[-1])
    if total <= 1e-300:
        # degenerate model: fall back to a uniform step
        return rng.open_unit() * r_max
    tau = rng.open_unit() * total
    return float(min(np.interp(tau, cdf, grid), r_max))


def sample_step_size(model: DistanceModel, r_max: float, rng: RandomStream,
                     grid_points: int = 256) -> float:
    grid, cdf = distance_cdf(model, r_max, grid_points)
    return _inverse_step(grid, cdf, r_max, rng)


def _window_box(point, radius: float):
    lo = np.maximum(point - radius, 0.0)
    hi = np.minimum(point + radius, 1.0)
    return lo, hi


def bootstrap_proposal(point, parent_point, radius: float, index: int,
                       rng: RandomStream) -> np.ndarray:
    """The ``index``-th entry of the fixed warm-up schedule for a node.

    0: extrapolate the parent-to-node displacement (momentum); 1: geometric
    center of the node's window; 2: the window's upper diagonal corner;
    then isotropic draws. Proposals are clipped into the window box, and
    anything that lands on the node itself is replaced by an isotropic draw.
    """
    point = np.asarray(point, dtype=float)
    lo, hi = _window_box(point, radius)
    cand = None
    if index == 0 and parent_point is not None:
        cand = 2.0 * point - np.asarray(parent_point, dtype=float)
    elif index == 1:
        cand = 0.5 * (lo + hi)
    elif index == 2:
        cand = hi.copy()
    if cand is None:
        cand = hypersphere_sample(point, HypersphereConfig(radius), rng)
    cand = np.clip(cand, lo, hi)
    if np.linalg.norm(cand - point) < _DUPLICATE_EPS:
        cand = hypersphere_sample(point, HypersphereConfig(radius), rng)
    return cand


def bootstrap_proposals(point, parent_point, radius: float, count: int,
                        rng: RandomStream) -> list[np.ndarray]:
    if count < 3:
        raise ValueError("bootstrap schedule needs at least 3 proposals")
    return [bootstrap_proposal(point, parent_point, radius, i, rng) for i in range(count)]


class NodeSurrogate:
    """Trial history plus lazily refit models for a single node."""

    __slots__ = ("history", "direction", "distance", "cdf_grid", "cdf_values", "trained_at")

    def __init__(self):
        self.history = TrialHistory()
        self.direction: LogisticModel | None = None
        self.distance: DistanceModel | None = None
        self.cdf_grid: np.ndarray | None = None
        self.cdf_values: np.ndarray | None = None
        self.trained_at = -1

    def record(self, delta, outcome, label) -> None:
        self.history.append(delta, outcome, label)


class LogisticSampler:
    """Proposal kernel: bootstrap schedule, then model-guided direction and step.

    Falls back to isotropic hypersphere draws whenever the node's recent
    history holds fewer than two distinct labels or the models are not yet
    trained (refits happen exactly when the history size is a multiple of
    the retrain period).
    """

    def __init__(self, cfg: SurrogateConfig | None = None):
        self.cfg = cfg or SurrogateConfig()

    def propose(self, node, radius: float, rng: RandomStream) -> np.ndarray:
        cfg = self.cfg
        sur = node.surrogate
        n = len(sur.history)
        if n < cfg.bootstrap_count:
            parent_point = node.parent.point if node.parent is not None else None
            return bootstrap_proposal(node.point, parent_point, radius, n, rng)
        if n % cfg.retrain_period == 0 and sur.trained_at != n:
            self._retrain(sur, radius, n)
        if (sur.direction is None or not sur.direction.informative
                or sur.distance is None or not sur.distance.informative):
            return hypersphere_sample(node.point, HypersphereConfig(radius), rng)
        d = node.point.size
        iters = cfg.hill_climb_iters if cfg.hill_climb_iters is not None else 10 * d
        u = optimize_direction(sur.direction, rng, iters)
        r = _inverse_step(sur.cdf_grid, sur.cdf_values, radius, rng)
        cand = np.clip(node.point + r * u / np.linalg.norm(u), 0.0, 1.0)
        if np.linalg.norm(cand - node.point) < _DUPLICATE_EPS:
            cand = hypersphere_sample(node.point, HypersphereConfig(radius), rng)
        return cand

    def _retrain(self, sur: NodeSurrogate, radius: float, n: int) -> None:
        cfg = self.cfg
        sur.trained_at = n
        deltas, rs, labels = sur.history.recent(cfg.history_window)
        if labels.min() == labels.max():
            sur.direction = LogisticModel(np.zeros(deltas.shape[1]), 0.0, False)
            sur.distance = None
            return
        w, b, ok = train_logistic(np.sign(deltas), labels, cfg)
        sur.direction = LogisticModel(w, b, ok)
        centers = rbf_centers(radius, cfg.rbf_count)
        w, b, ok = train_logistic(rbf_features(rs, centers), labels, cfg)
        sur.distance = DistanceModel(w, b, ok, centers)
        if ok:
            sur.cdf_grid, sur.cdf_values = distance_cdf(sur.distance, radius, cfg.cdf_grid)
