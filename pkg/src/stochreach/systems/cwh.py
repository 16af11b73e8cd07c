"""LQR-closed-loop Clohessy-Wiltshire-Hill rendezvous model."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..distributions import ProductDistribution
from ..intervals import IntervalVector
from ..system import StochasticSystem, SystemDynamics, linear_decomposition
from .linalg import dlqr, zoh_discretize

__all__ = ["CwhConfig", "cwh_continuous_matrices", "cwh_closed_loop", "build_cwh_system"]

MU_EARTH = 3.986004418e14  # m^3/s^2


def _tuple(v):
    return tuple(float(a) for a in v)


@dataclass(frozen=True)
class CwhConfig:
    mu: float = MU_EARTH
    R0: float = 7_228_140.0  # ~850 km altitude
    mass: float = 300.0
    Ts: float = 20.0
    Q_diag: tuple = (1.0, 1.0, 10.0, 10.0)
    R_diag: tuple = (10.0, 10.0)
    x0_mean: tuple = (10.0, -5.0, 0.0, 0.0)
    x0_cov_diag: tuple = (0.5, 0.5, 0.01, 0.01)
    w_mean: tuple = (0.0, 0.0, 0.0, 0.0)
    w_cov_diag: tuple = (0.1, 0.1, 0.01, 0.01)

    def __post_init__(self):
        for name in ("Q_diag", "R_diag", "x0_mean", "x0_cov_diag", "w_mean", "w_cov_diag"):
            object.__setattr__(self, name, _tuple(getattr(self, name)))
        if min(self.mu, self.R0, self.mass, self.Ts) <= 0:
            raise ValueError("mu, R0, mass and Ts must be positive")
        if len(self.Q_diag) != 4 or len(self.R_diag) != 2:
            raise ValueError("Q_diag needs 4 entries and R_diag 2")
        if min(self.Q_diag) <= 0 or min(self.R_diag) <= 0:
            raise ValueError("LQR weights must be positive")
        for name in ("x0_mean", "x0_cov_diag", "w_mean", "w_cov_diag"):
            if len(getattr(self, name)) != 4:
                raise ValueError(f"{name} needs 4 entries")
        if min(self.x0_cov_diag) < 0 or min(self.w_cov_diag) < 0:
            raise ValueError("covariance diagonals must be >= 0")

    @property
    def omega(self) -> float:
        return math.sqrt(self.mu / self.R0 ** 3)

    def x0_distribution(self) -> ProductDistribution:
        return ProductDistribution.gaussian(self.x0_mean, self.x0_cov_diag)

    def w_distribution(self) -> ProductDistribution:
        return ProductDistribution.gaussian(self.w_mean, self.w_cov_diag)


def cwh_continuous_matrices(c: CwhConfig):
    """State [x1, x2, x1dot, x2dot], input [Fx, Fy]."""
    w = c.omega
    A = np.array([
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [3.0 * w * w, 0.0, 0.0, 2.0 * w],
        [0.0, 0.0, -2.0 * w, 0.0],
    ])
    B = np.vstack([np.zeros((2, 2)), np.eye(2)]) / c.mass
    return A, B


def cwh_closed_loop(c: CwhConfig):
    """Return (A_hat, K, Ad, Bd) with A_hat = Ad - Bd K."""
    A, B = cwh_continuous_matrices(c)
    Ad, Bd = zoh_discretize(A, B, c.Ts)
    K = dlqr(Ad, Bd, np.diag(c.Q_diag), np.diag(c.R_diag))
    return Ad - Bd @ K, K, Ad, Bd


def _default_box(mean, var, scale=6.0):
    mean = np.asarray(mean, dtype=np.float64)
    half = scale * np.sqrt(np.asarray(var, dtype=np.float64)) + 1.0
    return IntervalVector(mean - half, mean + half)


def build_cwh_system(c: CwhConfig | None = None) -> StochasticSystem:
    c = c or CwhConfig()
    A_hat, K, Ad, Bd = cwh_closed_loop(c)
    G = np.eye(4)
    At = A_hat.T.copy()

    def step(x, w):
        return x @ At + w

    # the validation domain spans the initial spread out to the origin
    x0 = _default_box(c.x0_mean, c.x0_cov_diag)
    dom = IntervalVector(np.minimum(x0.lower, 0.0), np.maximum(x0.upper, 0.0))
    return StochasticSystem(
        dynamics=SystemDynamics(4, 4, step),
        decomposition=linear_decomposition(A_hat, G),
        domain=dom,
        disturbance_domain=_default_box(c.w_mean, c.w_cov_diag),
        name="cwh",
        meta={"A_hat": A_hat, "K": K, "Ad": Ad, "Bd": Bd, "G": G, "Ts": c.Ts},
    )
