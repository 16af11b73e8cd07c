"""7-state spacecraft attitude loop (quaternion + body rates) with a
saturated PD controller, Euler-discretized."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .. import kernels
from ..distributions import ProductDistribution
from ..intervals import IntervalVector
from ..system import SearchConfig, StochasticSystem, SystemDynamics, tight_decomposition_numeric

__all__ = [
    "AttitudeConfig",
    "attitude_continuous",
    "pd_saturated_control",
    "build_attitude_system",
    "project_theta",
    "theta",
]

J_DEFAULT = (
    (17.5, -0.8, 0.3),
    (-0.8, 14.9, 0.4),
    (0.3, 0.4, 20.8),
)


@dataclass(frozen=True)
class AttitudeConfig:
    J: tuple = J_DEFAULT
    kp: float = 0.6
    kd: float = 2.25
    Ts: float = 0.01
    x0_mean: tuple = (math.sqrt(3) / 2, 0.5, 0.0, 0.0, 0.1, 0.1, 0.1)
    x0_cov_diag: tuple = (1e-6, 1e-6, 1e-8, 1e-8, 1e-3, 1e-3, 1e-3)
    w_cov_diag: tuple = (5e-3, 5e-3, 5e-3)

    def __post_init__(self):
        J = np.asarray(self.J, dtype=np.float64)
        if J.shape != (3, 3):
            raise ValueError("J must be 3x3")
        if not np.allclose(J, J.T):
            raise ValueError("J must be symmetric")
        if np.min(np.linalg.eigvalsh(J)) <= 0:
            raise ValueError("J must be positive definite")
        if min(self.kp, self.kd, self.Ts) <= 0:
            raise ValueError("kp, kd and Ts must be positive")
        if len(self.x0_mean) != 7 or len(self.x0_cov_diag) != 7 or len(self.w_cov_diag) != 3:
            raise ValueError("x0_mean/x0_cov_diag need 7 entries, w_cov_diag 3")
        if min(self.x0_cov_diag) < 0 or min(self.w_cov_diag) < 0:
            raise ValueError("covariance diagonals must be >= 0")
        object.__setattr__(self, "J", tuple(tuple(float(v) for v in row) for row in J))
        for name in ("x0_mean", "x0_cov_diag", "w_cov_diag"):
            object.__setattr__(self, name, tuple(float(v) for v in getattr(self, name)))

    @property
    def J_matrix(self) -> np.ndarray:
        return np.array(self.J)

    def x0_distribution(self) -> ProductDistribution:
        return ProductDistribution.gaussian(self.x0_mean, self.x0_cov_diag)

    def w_distribution(self) -> ProductDistribution:
        return ProductDistribution.gaussian(np.zeros(3), self.w_cov_diag)


def pd_saturated_control(x, c: AttitudeConfig) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    J = c.J_matrix
    q0, q1, q2, q3 = x[..., 0], x[..., 1], x[..., 2], x[..., 3]
    om = x[..., 4:7]
    Jw = om @ J.T
    err = np.stack([2.0 * (q2 * q3 + q0 * q1), 2.0 * (q0 * q2 - q1 * q3), np.zeros_like(q0)], axis=-1)
    u_pd = np.cross(om, Jw) - c.kp * (err @ J.T) - c.kd * Jw
    return 0.5 * np.tanh(2.0 * u_pd)


def attitude_continuous(x, u, w, c: AttitudeConfig) -> np.ndarray:
    """[q_dot, omega_dot] for state x = [q0, q1, q2, q3, w1, w2, w3]."""
    x = np.asarray(x, dtype=np.float64)
    u = np.asarray(u, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    J = c.J_matrix
    q0, q1, q2, q3 = x[..., 0], x[..., 1], x[..., 2], x[..., 3]
    om = x[..., 4:7]
    Xi = np.stack([
        np.stack([-q1, -q2, -q3], axis=-1),
        np.stack([q0, -q3, q2], axis=-1),
        np.stack([q3, q0, -q1], axis=-1),
        np.stack([-q2, q1, q0], axis=-1),
    ], axis=-2)
    q_dot = 0.5 * np.einsum("...ij,...j->...i", Xi, om)
    om_dot = np.linalg.solve(J, (-np.cross(om, om @ J.T) + u + w)[..., None])[..., 0]
    return np.concatenate([q_dot, om_dot], axis=-1)


def _make_step(c: AttitudeConfig):
    J = np.ascontiguousarray(c.J_matrix)
    Jinv = np.ascontiguousarray(np.linalg.inv(J))
    kp, kd, ts = float(c.kp), float(c.kd), float(c.Ts)

    def step(x, w):
        x = np.asarray(x, dtype=np.float64)
        w = np.asarray(w, dtype=np.float64)
        w = np.broadcast_to(w, x.shape[:-1] + (3,))
        lead = x.shape[:-1]
        X = np.ascontiguousarray(x.reshape(-1, 7))
        W = np.ascontiguousarray(w.reshape(-1, 3))
        return kernels.attitude_step(X, W, J, Jinv, kp, kd, ts).reshape(*lead, 7)

    return step


def build_attitude_system(
    c: AttitudeConfig | None = None,
    *,
    search: SearchConfig | None = None,
    domain: IntervalVector | None = None,
    disturbance_domain: IntervalVector | None = None,
) -> StochasticSystem:
    """Euler-discretized closed loop with a sampled tight decomposition.

    The default validation domains are mean +/- 3 std; pass the hull of the
    run-time argument boxes to validate where the tube actually lives.
    """
    c = c or AttitudeConfig()
    dyn = SystemDynamics(7, 3, _make_step(c))
    if domain is None:
        mu = np.array(c.x0_mean)
        half = 3.0 * np.sqrt(c.x0_cov_diag)
        domain = IntervalVector(mu - half, mu + half)
    if disturbance_domain is None:
        half = 3.0 * np.sqrt(c.w_cov_diag)
        disturbance_domain = IntervalVector(-half, half)
    return StochasticSystem(
        dynamics=dyn,
        decomposition=tight_decomposition_numeric(dyn, search),
        domain=domain,
        disturbance_domain=disturbance_domain,
        name="attitude7d",
        meta={"Ts": c.Ts},
    )


def theta(q) -> np.ndarray:
    """Line-of-sight angle arccos(1 - 2 q1^2 - 2 q2^2) from the full quaternion."""
    q = np.asarray(q, dtype=np.float64)
    return np.arccos(np.clip(1.0 - 2.0 * q[..., 1] ** 2 - 2.0 * q[..., 2] ** 2, -1.0, 1.0))


def _square_range(lo, hi):
    if lo <= 0.0 <= hi:
        return 0.0, max(lo * lo, hi * hi)
    a, b = lo * lo, hi * hi
    return min(a, b), max(a, b)


def project_theta(qbox: IntervalVector) -> tuple[float, float]:
    """Exact range of the line-of-sight angle over a (q1, q2) box."""
    if qbox.dim != 2:
        raise ValueError("project_theta expects a box over (q1, q2)")
    s1 = _square_range(qbox.lower[0], qbox.upper[0])
    s2 = _square_range(qbox.lower[1], qbox.upper[1])
    s_lo, s_hi = s1[0] + s2[0], s1[1] + s2[1]
    arg_hi = min(max(1.0 - 2.0 * s_lo, -1.0), 1.0)
    arg_lo = min(max(1.0 - 2.0 * s_hi, -1.0), 1.0)
    return float(np.arccos(arg_hi)), float(np.arccos(arg_lo))
