import math

import numpy as np
import pytest

from treeopt.sampling import RandomStream
from treeopt.surrogate import (DistanceModel, LogisticModel, LogisticSampler,
                               SurrogateConfig, bootstrap_proposal,
                               bootstrap_proposals, direction_features,
                               distance_cdf, logistic_grad, logistic_loss,
                               optimize_direction, rbf_centers, rbf_features,
                               sample_step_size, train_logistic)
from treeopt.tree import TreeNode


def _ks_statistic(samples, cdf):
    xs = np.sort(samples)
    n = xs.size
    theory = cdf(xs)
    return max(np.max(np.arange(1, n + 1) / n - theory),
               np.max(theory - np.arange(0, n) / n))


def test_direction_features():
    assert np.array_equal(direction_features([0.3, -0.2, 0.0]), [1.0, -1.0, 0.0])
    assert np.array_equal(direction_features(np.zeros(4)), np.zeros(4))
    delta = np.array([0.4, -0.8, 0.1])
    assert np.array_equal(direction_features(-delta), -direction_features(delta))


def test_rbf_features():
    centers = rbf_centers(1.0, 4)
    assert np.all(np.diff(centers) > 0)
    feats = rbf_features(centers[2], centers)
    assert feats[2] == 1.0
    offset = rbf_features(centers[1] + 1.0, centers)
    assert abs(offset[1] - math.exp(-1.0)) < 1e-12
    r = np.linspace(0, 2, 50)
    mat = rbf_features(r, centers)
    assert mat.shape == (50, 4)
    assert np.all((mat > 0.0) & (mat <= 1.0))


def test_train_separable():
    cfg = SurrogateConfig()
    features = np.array([[1.0]] * 50 + [[-1.0]] * 50)
    labels = np.array([1] * 50 + [0] * 50)
    w, b, ok = train_logistic(features, labels, cfg)
    assert ok
    assert w[0] > 0.0
    predicted = (features @ w + b) > 0.0
    assert np.array_equal(predicted, labels.astype(bool))


def test_train_constant_features_matches_base_rate():
    cfg = SurrogateConfig()
    features = np.ones((100, 3))
    labels = np.array([1] * 30 + [0] * 70)
    w, b, ok = train_logistic(features, labels, cfg)
    assert ok
    prob = 1.0 / (1.0 + math.exp(-(features[0] @ w + b)))
    assert abs(prob - 0.3) < 0.05


def test_train_single_class_uninformative():
    cfg = SurrogateConfig()
    w, b, ok = train_logistic(np.ones((5, 2)), np.ones(5), cfg)
    assert not ok


def test_train_loss_non_increasing():
    cfg = SurrogateConfig(train_iters=150)
    rng = np.random.default_rng(3)
    features = rng.normal(size=(60, 6))
    labels = (rng.random(60) < 0.4).astype(int)
    _, _, ok, losses = train_logistic(features, labels, cfg, record_loss=True)
    assert ok
    assert all(b <= a + 1e-12 for a, b in zip(losses, losses[1:]))


def test_gradient_matches_central_differences():
    # finite-difference oracle for the analytic gradient
    rng = np.random.default_rng(11)
    features = rng.normal(size=(40, 5))
    labels = (rng.random(40) < 0.5).astype(float)
    l2 = 1e-3
    h = 1e-6
    for _ in range(20):
        w = rng.normal(size=5)
        b = float(rng.normal())
        grad_w, grad_b = logistic_grad(w, b, features, labels, l2)
        for k in range(5):
            e = np.zeros(5)
            e[k] = h
            fd = (logistic_loss(w + e, b, features, labels, l2)
                  - logistic_loss(w - e, b, features, labels, l2)) / (2 * h)
            assert abs(grad_w[k] - fd) / max(abs(fd), 1e-8) < 1e-5
        fd_b = (logistic_loss(w, b + h, features, labels, l2)
                - logistic_loss(w, b - h, features, labels, l2)) / (2 * h)
        assert abs(grad_b - fd_b) / max(abs(fd_b), 1e-8) < 1e-5


def test_optimize_direction_single_positive_weight():
    model = LogisticModel(np.array([0.8]), bias=0.1)
    u = optimize_direction(model, RandomStream(1), 10)
    assert np.array_equal(u, [1.0])


def test_optimize_direction_zero_iters_sign_start():
    model = LogisticModel(np.array([0.5, -0.2, 0.0]), bias=0.0)
    u = optimize_direction(model, RandomStream(1), 0)
    assert np.array_equal(u, [1.0, -1.0, 1.0])  # zero weight broken to +1


def test_optimize_direction_never_decreases():
    rng = np.random.default_rng(5)
    stream = RandomStream(6)
    for _ in range(1000):
        w = rng.normal(size=6)
        model = LogisticModel(w, bias=float(rng.normal()))
        start = np.where(w < 0.0, -1.0, 1.0)
        u = optimize_direction(model, stream, 30)
        assert w @ u >= w @ start - 1e-12


def test_distance_cdf_constant_model():
    # zero weights give sigma = 0.5 everywhere, so the CDF is 0.5 * r
    model = DistanceModel(np.zeros(4), 0.0, centers=rbf_centers(1.0, 4))
    grid, cdf = distance_cdf(model, 1.0)
    assert cdf[0] == 0.0
    assert np.allclose(cdf, 0.5 * grid, atol=1e-12)


def test_distance_cdf_non_decreasing_random_models():
    rng = np.random.default_rng(9)
    for _ in range(100):
        centers = rbf_centers(0.5, 6)
        model = DistanceModel(rng.normal(size=6) * 3, float(rng.normal()), centers=centers)
        _, cdf = distance_cdf(model, 0.5)
        assert np.all(np.diff(cdf) >= 0.0)


def test_distance_cdf_grid_refinement():
    rng = np.random.default_rng(13)
    for _ in range(10):
        centers = rbf_centers(0.4, 8)
        model = DistanceModel(rng.normal(size=8), float(rng.normal()), centers=centers)
        _, coarse = distance_cdf(model, 0.4, 256)
        _, fine = distance_cdf(model, 0.4, 512)
        assert abs(coarse[-1] - fine[-1]) / fine[-1] < 1e-4


def test_sample_step_flat_model_uniform():
    model = DistanceModel(np.zeros(4), 0.0, centers=rbf_centers(0.3, 4))
    rng = RandomStream(21)
    samples = np.array([sample_step_size(model, 0.3, rng) for _ in range(10000)])
    assert np.all((samples > 0.0) & (samples <= 0.3))
    stat = _ks_statistic(samples, lambda r: np.clip(r / 0.3, 0, 1))
    assert stat < 0.02


def test_sample_step_matches_target_cdf():
    centers = rbf_centers(0.5, 8)
    weights = np.array([2.5, 1.0, -0.5, -2.0, -3.0, 1.5, 0.5, -1.0])
    model = DistanceModel(weights, -0.2, centers=centers)
    grid, cdf = distance_cdf(model, 0.5)
    total = cdf[-1]
    rng = RandomStream(22)
    samples = np.array([sample_step_size(model, 0.5, rng) for _ in range(10000)])
    stat = _ks_statistic(samples, lambda r: np.interp(r, grid, cdf) / total)
    assert stat < 0.02


def test_sample_step_degenerate_cdf_falls_back_uniform():
    # weights pushing sigma to underflow territory
    model = DistanceModel(np.full(4, -500.0), -500.0, centers=rbf_centers(0.2, 4))
    rng = RandomStream(23)
    samples = np.array([sample_step_size(model, 0.2, rng) for _ in range(2000)])
    assert np.all((samples > 0.0) & (samples <= 0.2))
    stat = _ks_statistic(samples, lambda r: np.clip(r / 0.2, 0, 1))
    assert stat < 0.05


def _node(point, value=1.0, radius=0.2, parent=None):
    node = TreeNode(0, np.asarray(point, dtype=float), value, depth=0,
                    parent=parent, window_radius=radius)
    return node


def test_bootstrap_schedule_rules():
    rng = RandomStream(31)
    parent = _node([0.3, 0.3])
    node = _node([0.4, 0.4], parent=parent)
    # momentum extrapolates the parent-to-node displacement
    momentum = bootstrap_proposal(node.point, parent.point, 0.2, 0, rng)
    assert np.allclose(momentum, [0.5, 0.5])
    # a node at its window center duplicates the center: replaced by a draw
    center = bootstrap_proposal(node.point, parent.point, 0.2, 1, rng)
    assert np.linalg.norm(center - node.point) > 1e-12
    # diagonal extremum is the window's upper corner
    corner = bootstrap_proposal(node.point, parent.point, 0.2, 2, rng)
    assert np.allclose(corner, [0.6, 0.6])


def test_bootstrap_without_parent_draws():
    rng = RandomStream(33)
    point = np.array([0.5, 0.5])
    prop = bootstrap_proposal(point, None, 0.1, 0, rng)
    assert np.linalg.norm(prop - point) > 1e-12
    assert np.linalg.norm(prop - point) <= 0.1 + 1e-12


def test_bootstrap_proposals_stay_in_window():
    rng = RandomStream(35)
    for _ in range(300):
        point = rng.gen.random(3)
        parent = rng.gen.random(3)
        radius = 0.05 + 0.4 * rng.gen.random()
        for prop in bootstrap_proposals(point, parent, radius, 8, rng):
            lo = np.maximum(point - radius, 0.0)
            hi = np.minimum(point + radius, 1.0)
            assert np.all(prop >= lo - 1e-12)
            assert np.all(prop <= hi + 1e-12)


def test_propose_bootstrap_first():
    sampler = LogisticSampler(SurrogateConfig())
    node = _node([0.4, 0.4], radius=0.2)
    a = sampler.propose(node, 0.2, RandomStream(40))
    b = bootstrap_proposal(node.point, None, 0.2, 0, RandomStream(40))
    assert np.array_equal(a, b)


def test_propose_retrains_on_schedule():
    cfg = SurrogateConfig(bootstrap_count=3, retrain_period=5)
    sampler = LogisticSampler(cfg)
    rng = RandomStream(41)
    node = _node(np.full(3, 0.5), value=1.0, radius=0.2)
    gen = np.random.default_rng(4)
    for i in range(10):
        delta = gen.normal(size=3) * 0.05
        outcome = 0.5 if i % 2 == 0 else 2.0
        node.surrogate.record(delta, outcome, outcome < node.value)
    sampler.propose(node, 0.2, rng)  # len(history) == 10 -> retrain
    assert node.surrogate.trained_at == 10
    node.surrogate.record(gen.normal(size=3) * 0.05, 0.4, True)
    sampler.propose(node, 0.2, rng)  # 11 % 5 != 0 -> keep the cached models
    assert node.surrogate.trained_at == 10


def test_propose_single_class_never_consults_models():
    cfg = SurrogateConfig(bootstrap_count=3, retrain_period=5)
    sampler = LogisticSampler(cfg)
    node = _node(np.full(2, 0.5), value=1.0, radius=0.1)
    for _ in range(10):
        node.surrogate.record(np.array([0.01, 0.01]), 2.0, False)
    prop = sampler.propose(node, 0.1, RandomStream(43))
    assert node.surrogate.distance is None
    assert not node.surrogate.direction.informative
    assert np.linalg.norm(prop - node.point) <= 0.1 + 1e-12


def test_propose_learns_synthetic_history():
    # successes live in the all-positive orthant at step about 0.1
    d = 4
    cfg = SurrogateConfig(bootstrap_count=8, retrain_period=5)
    sampler = LogisticSampler(cfg)
    node = _node(np.full(d, 0.5), value=1.0, radius=0.3)
    gen = np.random.default_rng(17)
    for _ in range(50):
        direction = np.abs(gen.normal(size=d))
        delta = 0.1 * direction / np.linalg.norm(direction)
        node.surrogate.record(delta, 0.5, True)
    for _ in range(50):
        direction = -np.abs(gen.normal(size=d))
        delta = 0.25 * direction / np.linalg.norm(direction)
        node.surrogate.record(delta, 2.0, False)
    rng = RandomStream(44)
    positive = 0
    steps = []
    for _ in range(200):
        prop = sampler.propose(node, 0.3, rng)
        step = prop - node.point
        steps.append(np.linalg.norm(step))
        if np.all(step > 0.0):
            positive += 1
    assert positive / 200 > 0.9
    assert 0.05 <= np.median(steps) <= 0.2


def test_labeling_consistency():
    node = _node(np.full(2, 0.5), value=1.0)
    gen = np.random.default_rng(2)
    for _ in range(50):
        delta = gen.normal(size=2) * 0.1
        outcome = float(gen.normal() + 1.0)
        node.surrogate.record(delta, outcome, outcome < node.value)
    hist = node.history
    for delta, r, outcome, label in zip(hist.deltas, hist.rs, hist.outcomes, hist.labels):
        assert label == (1 if outcome < node.value else 0)
        assert abs(r - np.linalg.norm(delta)) < 1e-12


def test_surrogate_config_validation():
    with pytest.raises(ValueError):
        SurrogateConfig(bootstrap_count=2)
    with pytest.raises(ValueError):
        SurrogateConfig(retrain_period=0)
    with pytest.raises(ValueError):
        SurrogateConfig(rbf_count=2)
