from .attitude import (
    AttitudeConfig,
    attitude_continuous,
    build_attitude_system,
    pd_saturated_control,
    project_theta,
    theta,
)
from .cwh import CwhConfig, build_cwh_system, cwh_closed_loop, cwh_continuous_matrices
from .linalg import dare_iterate, dlqr, zoh_discretize

__all__ = [
    "AttitudeConfig",
    "CwhConfig",
    "attitude_continuous",
    "build_attitude_system",
    "build_cwh_system",
    "cwh_closed_loop",
    "cwh_continuous_matrices",
    "dare_iterate",
    "dlqr",
    "pd_saturated_control",
    "project_theta",
    "theta",
    "zoh_discretize",
]
