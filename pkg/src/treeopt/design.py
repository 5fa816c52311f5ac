"""Constrained engineering design problems: welded beam and pressure vessel.

Both problems expose their raw cost and constraint systems plus a penalized
scalar objective (cost + penalty * total violation) for box-constrained
optimizers. Constraint values g_i <= 0 mean satisfied; all quantities stay
in their raw units (psi, lbf, inches).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Objective, SearchSpace

DEFAULT_PENALTY = 1e6

# welded beam material constants
BEAM_E = 30e6   # Young's modulus, psi
BEAM_G = 12e6   # shear modulus, psi
BEAM_P = 6000.0  # applied load, lbf
BEAM_L = 14.0   # beam length, in

WELDED_BEAM_LOWER = np.array([0.1, 0.1, 0.1, 0.1])
WELDED_BEAM_UPPER = np.array([2.0, 10.0, 10.0, 2.0])

PRESSURE_VESSEL_LOWER = np.array([0.0, 0.0, 10.0, 10.0])
PRESSURE_VESSEL_UPPER = np.array([99.0, 99.0, 200.0, 200.0])


@dataclass
class ConstraintReport:
    values: np.ndarray        # signed g_i, satisfied when <= 0
    feasible: bool
    violation: float          # sum of positive parts

    @classmethod
    def from_values(cls, values) -> "ConstraintReport":
        values = np.asarray(values, dtype=float)
        violation = float(np.sum(np.maximum(values, 0.0)))
        return cls(values=values, feasible=violation == 0.0, violation=violation)


def welded_beam_cost(x) -> float:
    """Fabrication cost of the welded beam design (x = [h, l, t, b])."""
    x1, x2, x3, x4 = np.asarray(x, dtype=float)
    return float(1.10471 * x1 ** 2 * x2 + 0.04811 * x3 * x4 * (14.0 + x2))


def welded_beam_constraints(x) -> ConstraintReport:
    """Shear, bending, geometry, deflection, and buckling constraints.

    Requires strictly positive design variables (the shear term divides by
    x1 * x2).
    """
    x1, x2, x3, x4 = np.asarray(x, dtype=float)
    if min(x1, x2, x3, x4) <= 0.0:
        raise ValueError("welded beam variables must be strictly positive")
    tau_p = 6000.0 / (math.sqrt(2.0) * x1 * x2)
    radius = math.sqrt(0.25 * (x2 ** 2 + (x1 + x3) ** 2))
    moment = 6000.0 * (14.0 + x2 / 2.0)
    polar = 2.0 * math.sqrt(2.0) * x1 * x2 * (x2 ** 2 / 12.0 + ((x1 + x3) / 2.0) ** 2)
    tau_pp = moment * radius / (2.0 * polar)
    tau = math.sqrt(tau_p ** 2 + 2.0 * tau_p * tau_pp * x2 / (2.0 * radius) + tau_pp ** 2)
    sigma = 504000.0 / (x3 ** 2 * x4)
    deflection = 65.0 * 6000.0 * 14.0 ** 3 / (30.0 * BEAM_E * x3 ** 4 * x4)
    buckling = (4.013 * BEAM_E * math.sqrt(x3 ** 2 * x4 ** 6 / 36.0) / BEAM_L ** 2
                * (1.0 - x3 / (2.0 * BEAM_L) * math.sqrt(BEAM_E / (4.0 * BEAM_G))))
    return ConstraintReport.from_values([
        x1 - x4,
        tau - 13600.0,
        sigma - 30000.0,
        0.125 - x1,
        deflection - 0.25,
        BEAM_P - buckling,
    ])


def pressure_vessel_cost(x) -> float:
    """Material, forming, and welding cost of the vessel (x = [Ts, Th, R, L])."""
    x1, x2, x3, x4 = np.asarray(x, dtype=float)
    return float(0.6224 * x1 * x3 * x4 + 1.7781 * x2 * x3 ** 2
                 + 3.1661 * x1 ** 2 * x4 + 19.84 * x1 ** 2 * x3)


def pressure_vessel_constraints(x) -> ConstraintReport:
    """Shell/head thickness, enclosed volume, and length constraints."""
    x1, x2, x3, x4 = np.asarray(x, dtype=float)
    return ConstraintReport.from_values([
        -x1 + 0.0193 * x3,
        -x2 + 0.00954 * x3,
        -math.pi * x3 ** 2 * x4 - 4.0 / 3.0 * math.pi * x3 ** 3 + 1296000.0,
        x4 - 240.0,
    ])


def penalized_objective(cost_fn, constraints_fn, x, penalty: float = DEFAULT_PENALTY) -> float:
    """Linear exterior penalty: cost + penalty * sum(max(0, g_i)).

    Equals the raw cost exactly on feasible designs, so feasible-region
    ordering is untouched.
    """
    if penalty <= 0.0:
        raise ValueError("penalty coefficient must be positive")
    return float(cost_fn(x)) + penalty * constraints_fn(x).violation


def make_welded_beam(penalty: float = DEFAULT_PENALTY) -> Objective:
    space = SearchSpace(WELDED_BEAM_LOWER, WELDED_BEAM_UPPER)

    def fn(x):
        return penalized_objective(welded_beam_cost, welded_beam_constraints, x, penalty)

    return Objective(space, fn, name="welded_beam")


def make_pressure_vessel(penalty: float = DEFAULT_PENALTY) -> Objective:
    space = SearchSpace(PRESSURE_VESSEL_LOWER, PRESSURE_VESSEL_UPPER)

    def fn(x):
        return penalized_objective(pressure_vessel_cost, pressure_vessel_constraints, x, penalty)

    return Objective(space, fn, name="pressure_vessel")
