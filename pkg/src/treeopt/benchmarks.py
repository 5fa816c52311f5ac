"""The classic 23-function test suite (F1-F23).

F1-F7 are scalable unimodal functions, F8-F13 scalable multimodal, and
F14-F23 fixed-dimensional multimodal problems (foxholes, Kowalik, six-hump
camel, Branin, Goldstein-Price, Hartmann 3/6, Shekel 5/7/10). Dimensions,
ranges, and reference minima follow the standard published suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Objective, SearchSpace

UNIMODAL = "unimodal"
MULTIMODAL = "multimodal"
FIXED = "fixed-dimensional"


def penalty_u(x: float, a: float, k: float, m: float) -> float:
    """Boundary penalty term of the penalized functions F12/F13."""
    if x > a:
        return k * (x - a) ** m
    if x < -a:
        return k * (-x - a) ** m
    return 0.0


def _f1(x):
    return float(np.sum(x * x))


def _f2(x):
    ax = np.abs(x)
    return float(np.sum(ax) + np.prod(ax))


def _f3(x):
    return float(np.sum(np.cumsum(x) ** 2))


def _f4(x):
    return float(np.max(np.abs(x)))


def _f5(x):
    return float(np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (x[:-1] - 1.0) ** 2))


def _f6(x):
    return float(np.sum(np.floor(x + 0.5) ** 2))


def _f7(x, noise):
    i = np.arange(1, x.size + 1)
    return float(np.sum(i * x ** 4) + noise)


def _f8(x):
    return float(np.sum(-x * np.sin(np.sqrt(np.abs(x)))))


def _f9(x):
    return float(np.sum(x * x - 10.0 * np.cos(2.0 * np.pi * x) + 10.0))


def _f10(x):
    n = x.size
    return float(-20.0 * np.exp(-0.2 * np.sqrt(np.sum(x * x) / n))
                 - np.exp(np.sum(np.cos(2.0 * np.pi * x)) / n) + 20.0 + math.e)


def _f11(x):
    i = np.arange(1, x.size + 1)
    return float(np.sum(x * x) / 4000.0 - np.prod(np.cos(x / np.sqrt(i))) + 1.0)


def _f12(x):
    n = x.size
    y = 1.0 + (x + 1.0) / 4.0
    core = (10.0 * np.sin(np.pi * y[0]) ** 2
            + np.sum((y[:-1] - 1.0) ** 2 * (1.0 + 10.0 * np.sin(np.pi * y[1:]) ** 2))
            + (y[-1] - 1.0) ** 2)
    penalty = sum(penalty_u(xi, 10.0, 100.0, 4.0) for xi in x)
    return float(np.pi / n * core + penalty)


def _f13(x):
    core = (np.sin(3.0 * np.pi * x[0]) ** 2
            + np.sum((x[:-1] - 1.0) ** 2 * (1.0 + np.sin(3.0 * np.pi * x[1:]) ** 2))
            + (x[-1] - 1.0) ** 2 * (1.0 + np.sin(2.0 * np.pi * x[-1]) ** 2))
    penalty = sum(penalty_u(xi, 5.0, 100.0, 4.0) for xi in x)
    return float(0.1 * core + penalty)


# Shekel's foxholes (De Jong 5): 25 foxholes on a 5x5 grid
_FOXHOLE_A = np.array([
    [-32, -16, 0, 16, 32] * 5,
    [-32] * 5 + [-16] * 5 + [0] * 5 + [16] * 5 + [32] * 5,
], dtype=float)


def _f14(x):
    j = np.arange(1, 26)
    denom = j + (x[0] - _FOXHOLE_A[0]) ** 6 + (x[1] - _FOXHOLE_A[1]) ** 6
    return float(1.0 / (1.0 / 500.0 + np.sum(1.0 / denom)))


# Kowalik's function
_KOWALIK_A = np.array([0.1957, 0.1947, 0.1735, 0.1600, 0.0844, 0.0627,
                       0.0456, 0.0342, 0.0323, 0.0235, 0.0246])
_KOWALIK_B = 1.0 / np.array([0.25, 0.5, 1.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0])


def _f15(x):
    b = _KOWALIK_B
    model = x[0] * (b * b + b * x[1]) / (b * b + b * x[2] + x[3])
    return float(np.sum((_KOWALIK_A - model) ** 2))


def _f16(x):
    x1, x2 = x
    return float(4.0 * x1 ** 2 - 2.1 * x1 ** 4 + x1 ** 6 / 3.0
                 + x1 * x2 - 4.0 * x2 ** 2 + 4.0 * x2 ** 4)


def _f17(x):
    x1, x2 = x
    return float((x2 - 5.1 / (4.0 * np.pi ** 2) * x1 ** 2 + 5.0 / np.pi * x1 - 6.0) ** 2
                 + 10.0 * (1.0 - 1.0 / (8.0 * np.pi)) * np.cos(x1) + 10.0)


def _f18(x):
    x1, x2 = x
    term1 = 1.0 + (x1 + x2 + 1.0) ** 2 * (19.0 - 14.0 * x1 + 3.0 * x1 ** 2
                                          - 14.0 * x2 + 6.0 * x1 * x2 + 3.0 * x2 ** 2)
    term2 = 30.0 + (2.0 * x1 - 3.0 * x2) ** 2 * (18.0 - 32.0 * x1 + 12.0 * x1 ** 2
                                                 + 48.0 * x2 - 36.0 * x1 * x2 + 27.0 * x2 ** 2)
    return float(term1 * term2)


# Hartmann 3-D
_HARTMANN3_A = np.array([[3.0, 10.0, 30.0],
                         [0.1, 10.0, 35.0],
                         [3.0, 10.0, 30.0],
                         [0.1, 10.0, 35.0]])
_HARTMANN3_P = np.array([[0.3689, 0.1170, 0.2673],
                         [0.4699, 0.4387, 0.7470],
                         [0.1091, 0.8732, 0.5547],
                         [0.0381, 0.5743, 0.8828]])
_HARTMANN_C = np.array([1.0, 1.2, 3.0, 3.2])

# Hartmann 6-D
_HARTMANN6_A = np.array([[10.0, 3.0, 17.0, 3.5, 1.7, 8.0],
                         [0.05, 10.0, 17.0, 0.1, 8.0, 14.0],
                         [3.0, 3.5, 1.7, 10.0, 17.0, 8.0],
                         [17.0, 8.0, 0.05, 10.0, 0.1, 14.0]])
_HARTMANN6_P = 1e-4 * np.array([[1312, 1696, 5569, 124, 8283, 5886],
                                [2329, 4135, 8307, 3736, 1004, 9991],
                                [2348, 1451, 3522, 2883, 3047, 6650],
                                [4047, 8828, 8732, 5743, 1091, 381]], dtype=float)


def _hartmann(x, a, p):
    inner = np.sum(a * (x[None, :] - p) ** 2, axis=1)
    return float(-np.sum(_HARTMANN_C * np.exp(-inner)))


def _f19(x):
    return _hartmann(x, _HARTMANN3_A, _HARTMANN3_P)


def _f20(x):
    return _hartmann(x, _HARTMANN6_A, _HARTMANN6_P)


# Shekel family
_SHEKEL_A = np.array([[4.0, 4.0, 4.0, 4.0],
                      [1.0, 1.0, 1.0, 1.0],
                      [8.0, 8.0, 8.0, 8.0],
                      [6.0, 6.0, 6.0, 6.0],
                      [3.0, 7.0, 3.0, 7.0],
                      [2.0, 9.0, 2.0, 9.0],
                      [5.0, 5.0, 3.0, 3.0],
                      [8.0, 1.0, 8.0, 1.0],
                      [6.0, 2.0, 6.0, 2.0],
                      [7.0, 3.6, 7.0, 3.6]])
_SHEKEL_C = np.array([0.1, 0.2, 0.2, 0.4, 0.4, 0.6, 0.3, 0.7, 0.5, 0.5])


def _shekel(x, m):
    diff = x[None, :] - _SHEKEL_A[:m]
    return float(-np.sum(1.0 / (np.sum(diff * diff, axis=1) + _SHEKEL_C[:m])))


def _f21(x):
    return _shekel(x, 5)


def _f22(x):
    return _shekel(x, 7)


def _f23(x):
    return _shekel(x, 10)


@dataclass(frozen=True)
class BenchmarkSpec:
    """Registry row: dimension, symmetric or explicit bounds, reference minimum."""

    fid: str
    category: str
    dim: int
    lower: float
    upper: float
    fmin: float
    fn: callable
    noisy: bool = False
    scalable: bool = False


# fmin values use the most precise figure published for the suite; for the
# scalable functions fmin is exact at the analytic minimizer.
_TABLE = [
    BenchmarkSpec("F1", UNIMODAL, 30, -100, 100, 0.0, _f1, scalable=True),
    BenchmarkSpec("F2", UNIMODAL, 30, -10, 10, 0.0, _f2, scalable=True),
    BenchmarkSpec("F3", UNIMODAL, 30, -100, 100, 0.0, _f3, scalable=True),
    BenchmarkSpec("F4", UNIMODAL, 30, -100, 100, 0.0, _f4, scalable=True),
    BenchmarkSpec("F5", UNIMODAL, 30, -30, 30, 0.0, _f5, scalable=True),
    BenchmarkSpec("F6", UNIMODAL, 30, -100, 100, 0.0, _f6, scalable=True),
    BenchmarkSpec("F7", UNIMODAL, 30, -1.28, 1.28, 0.0, _f7, noisy=True, scalable=True),
    BenchmarkSpec("F8", MULTIMODAL, 30, -500, 500, -418.9829 * 30, _f8, scalable=True),
    BenchmarkSpec("F9", MULTIMODAL, 30, -5.12, 5.12, 0.0, _f9, scalable=True),
    BenchmarkSpec("F10", MULTIMODAL, 30, -32, 32, 0.0, _f10, scalable=True),
    BenchmarkSpec("F11", MULTIMODAL, 30, -600, 600, 0.0, _f11, scalable=True),
    BenchmarkSpec("F12", MULTIMODAL, 30, -50, 50, 0.0, _f12, scalable=True),
    BenchmarkSpec("F13", MULTIMODAL, 30, -50, 50, 0.0, _f13, scalable=True),
    BenchmarkSpec("F14", FIXED, 2, -65, 65, 0.998004, _f14),
    BenchmarkSpec("F15", FIXED, 4, -5, 5, 0.00030, _f15),
    BenchmarkSpec("F16", FIXED, 2, -5, 5, -1.03163, _f16),
    BenchmarkSpec("F17", FIXED, 2, -5, 5, 0.397887, _f17),
    BenchmarkSpec("F18", FIXED, 2, -2, 2, 3.0, _f18),
    BenchmarkSpec("F19", FIXED, 3, 0, 1, -3.86278, _f19),
    BenchmarkSpec("F20", FIXED, 6, 0, 1, -3.32237, _f20),
    BenchmarkSpec("F21", FIXED, 4, 0, 10, -10.1532, _f21),
    BenchmarkSpec("F22", FIXED, 4, 0, 10, -10.4029, _f22),
    BenchmarkSpec("F23", FIXED, 4, 0, 10, -10.5364, _f23),
]

BENCHMARKS: dict[str, BenchmarkSpec] = {spec.fid: spec for spec in _TABLE}


def benchmark_value(fid: str, point, noise: float | None = None) -> float:
    """Evaluate one benchmark formula directly; F7 requires a noise draw."""
    spec = BENCHMARKS[fid]
    x = np.asarray(point, dtype=float)
    if spec.noisy:
        if noise is None:
            raise ValueError(f"{fid} is stochastic and needs a unit-uniform noise draw")
        return spec.fn(x, noise)
    return spec.fn(x)


def make_benchmark(fid: str, dim: int | None = None) -> Objective:
    """Build the Objective for a benchmark id, optionally overriding the
    dimension of a scalable function."""
    if fid not in BENCHMARKS:
        raise KeyError(f"unknown benchmark {fid!r}")
    spec = BENCHMARKS[fid]
    if dim is not None and dim != spec.dim:
        if not spec.scalable:
            raise ValueError(f"{fid} has a fixed dimension of {spec.dim}")
        n = int(dim)
    else:
        n = spec.dim
    fmin = spec.fmin
    if spec.fid == "F8":
        fmin = -418.9829 * n
    space = SearchSpace.box(n, spec.lower, spec.upper)
    return Objective(space, spec.fn, known_min=fmin, noisy=spec.noisy, name=spec.fid)
