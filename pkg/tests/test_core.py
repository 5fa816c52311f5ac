import numpy as np
import pytest

from treeopt.core import (Budget, BudgetExhausted, Evaluator, Objective,
                          SearchSpace, clamp, denormalize, evaluate_counted,
                          normalize)


def test_searchspace_validation():
    with pytest.raises(ValueError):
        SearchSpace([0.0, 1.0], [1.0, 1.0])
    with pytest.raises(ValueError):
        SearchSpace([], [])
    space = SearchSpace.symmetric(3, 2.0)
    assert space.dim == 3
    assert np.all(space.lower == -2.0)


def test_normalize_boundaries():
    space = SearchSpace.symmetric(2, 100.0)
    assert np.allclose(normalize(space.lower, space), 0.0)
    assert np.allclose(normalize(space.upper, space), 1.0)
    assert np.allclose(normalize([0.0, 0.0], space), 0.5)


def test_normalize_dimension_mismatch():
    space = SearchSpace.symmetric(2, 1.0)
    with pytest.raises(ValueError):
        normalize([0.0, 0.0, 0.0], space)
    with pytest.raises(ValueError):
        denormalize([0.5], space)


def test_denormalize_boundaries():
    space = SearchSpace.symmetric(4, 10.0)
    assert np.allclose(denormalize(np.full(4, 0.5), space), 0.0)
    space2 = SearchSpace.box(3, 2.67, 4.96)
    assert np.allclose(denormalize(np.ones(3), space2), 4.96)
    with pytest.raises(ValueError):
        denormalize([1.2, 0.5, 0.5], space2)
    with pytest.raises(ValueError):
        denormalize([-0.1, 0.5, 0.5], space2)


def test_round_trip_1000_random():
    rng = np.random.default_rng(7)
    space = SearchSpace(rng.uniform(-50, 0, 8), rng.uniform(1, 50, 8))
    for _ in range(1000):
        v = rng.random(8)
        p = denormalize(v, space)
        back = normalize(p, space)
        assert np.allclose(back, v, rtol=1e-12, atol=1e-15)


def test_clamp():
    assert np.allclose(clamp([1.2, -0.1]), [1.0, 0.0])
    assert np.allclose(clamp([0.3, 0.7]), [0.3, 0.7])


def _sphere_objective(dim=3):
    space = SearchSpace.symmetric(dim, 100.0)
    return Objective(space, lambda x: float(np.sum(x * x)), known_min=0.0, name="sphere")


def test_evaluate_counted_increments():
    obj = _sphere_objective()
    budget = Budget(5)
    value = evaluate_counted(obj, np.zeros(3), budget)
    assert value == 0.0
    assert budget.used == 1


def test_budget_exhaustion_on_final_call():
    obj = _sphere_objective()
    budget = Budget(3)
    for _ in range(3):
        evaluate_counted(obj, np.ones(3), budget)
    with pytest.raises(BudgetExhausted):
        evaluate_counted(obj, np.ones(3), budget)
    assert budget.used == 3


def test_budget_reserve_absorb():
    budget = Budget(10)
    child = budget.reserve(4)
    assert child.max_evals == 4
    assert budget.remaining == 6
    obj = _sphere_objective()
    evaluate_counted(obj, np.zeros(3), child)
    budget.absorb(child)
    assert budget.used == 1
    assert budget.reserved == 0
    assert budget.remaining == 9
    # over-reservation is capped at what is left
    big = budget.reserve(100)
    assert big.max_evals == 9


def test_objective_purity():
    obj = _sphere_objective()
    p = np.array([1.5, -2.5, 3.0])
    assert obj.evaluate(p) == obj.evaluate(p)
    noisy = Objective(obj.space, lambda x, u: float(np.sum(x * x)) + u, noisy=True)
    assert noisy.evaluate(p, 0.25) == noisy.evaluate(p, 0.25)
    with pytest.raises(ValueError):
        noisy.evaluate(p)


def test_evaluator_trace_and_best():
    obj = _sphere_objective(2)
    budget = Budget(4)
    ev = Evaluator(obj, budget, log_points=True)
    ev(np.array([0.6, 0.6]))
    ev(np.array([0.5, 0.5]))  # the raw origin
    ev(np.array([0.9, 0.9]))
    assert budget.used == 3
    assert ev.best_value == 0.0
    assert np.allclose(ev.best_unit, 0.5)
    assert len(ev.values) == 3
    assert len(ev.points) == 3
