"""Trajectory sampling and empirical checks of the tube's probability bound."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .distributions import TAG_W, TAG_X0, ProductDistribution, joint_confidence_box, stream_uniforms
from .errors import DimensionError, NumericalError
from .reach import ReachTube
from .system import StochasticSystem

__all__ = [
    "TrajectoryEnsemble",
    "StepContainment",
    "ContainmentReport",
    "OrderReport",
    "binomial_slack",
    "sample_trajectories",
    "empirical_containment",
    "check_monotone_concentration",
    "check_stochastic_order",
]

TAG_CHECK = 2


def binomial_slack(M: int, sigmas: float = 3.0) -> float:
    """``sigmas * sqrt(0.25 / M)``: worst-case binomial standard error."""
    return sigmas * math.sqrt(0.25 / M)


@dataclass(frozen=True)
class TrajectoryEnsemble:
    trajectories: np.ndarray  # (M, N+1, n)
    flagged: np.ndarray  # (M,) bool, True where the state went non-finite
    master_seed: int
    first_index: int = 0

    @property
    def M(self) -> int:
        return self.trajectories.shape[0]

    @property
    def n_steps(self) -> int:
        return self.trajectories.shape[1]

    @property
    def seeds(self) -> list[tuple[int, int]]:
        """Stream id (master_seed, m) of each trajectory."""
        return [(self.master_seed, self.first_index + m) for m in range(self.M)]


def sample_trajectories(
    s: StochasticSystem,
    x0_dist: ProductDistribution,
    w_dist: ProductDistribution,
    N: int,
    M: int,
    master_seed: int,
    *,
    first_index: int = 0,
    chunk: int = 65536,
) -> TrajectoryEnsemble:
    """Simulate M independent trajectories of length N + 1.

    Trajectory ``m`` draws its uniforms from sub-streams keyed on
    ``(master_seed, m, k)``; chunking and ``first_index`` do not change them.
    """
    if M < 1 or N < 1:
        raise ValueError("M and N must be positive")
    if x0_dist.dim != s.state_dim or w_dist.dim != s.disturbance_dim:
        raise DimensionError("distribution dimensions do not match the system")
    n = s.state_dim
    traj = np.empty((M, N + 1, n))
    for start in range(0, M, chunk):
        cnt = min(chunk, M - start)
        m0 = first_index + start
        x = x0_dist.ppf(stream_uniforms(master_seed, TAG_X0, m0, cnt, 1, x0_dist.dim)[:, 0])
        ws = w_dist.ppf(stream_uniforms(master_seed, TAG_W, m0, cnt, N, w_dist.dim))
        traj[start:start + cnt, 0] = x
        with np.errstate(all="ignore"):
            for k in range(N):
                x = np.asarray(s.dynamics(x, ws[:, k]), dtype=np.float64)
                traj[start:start + cnt, k + 1] = x
    flagged = ~np.isfinite(traj).all(axis=(1, 2))
    return TrajectoryEnsemble(traj, flagged, master_seed, first_index)


@dataclass(frozen=True)
class StepContainment:
    k: int
    empirical_fraction: float
    theoretical_lower_bound: float
    sample_count: int
    contained_count: int


@dataclass
class ContainmentReport:
    per_step: list[StepContainment] = field(default_factory=list)

    @property
    def fractions(self) -> np.ndarray:
        return np.array([s.empirical_fraction for s in self.per_step])

    @property
    def bounds(self) -> np.ndarray:
        return np.array([s.theoretical_lower_bound for s in self.per_step])

    def failing_steps(self, sigmas: float = 3.0) -> list[int]:
        out = []
        for s in self.per_step:
            if s.empirical_fraction < s.theoretical_lower_bound - binomial_slack(s.sample_count, sigmas):
                out.append(s.k)
        return out

    def satisfied(self, sigmas: float = 3.0) -> bool:
        return not self.failing_steps(sigmas)

    def to_dict(self, sigmas: float = 3.0) -> dict:
        return {
            "per_step": [
                {
                    "k": s.k,
                    "empirical_fraction": s.empirical_fraction,
                    "theoretical_lower_bound": s.theoretical_lower_bound,
                    "sample_count": s.sample_count,
                    "contained_count": s.contained_count,
                }
                for s in self.per_step
            ],
            "slack": binomial_slack(self.per_step[0].sample_count, sigmas) if self.per_step else None,
            "failing_steps": self.failing_steps(sigmas),
            "satisfied": self.satisfied(sigmas),
        }


def empirical_containment(e: TrajectoryEnsemble, tube: ReachTube) -> ContainmentReport:
    if e.n_steps != len(tube):
        raise DimensionError(f"ensemble has {e.n_steps} steps, tube has {len(tube)}")
    if e.flagged.any():
        bad = np.flatnonzero(e.flagged)
        raise NumericalError(f"{bad.size} trajectories went non-finite (first: m={int(bad[0]) + e.first_index})")
    counts = kernels.count_contained(
        np.ascontiguousarray(e.trajectories), np.ascontiguousarray(tube.lowers), np.ascontiguousarray(tube.uppers)
    )
    rep = ContainmentReport()
    for k, c in enumerate(counts):
        rep.per_step.append(StepContainment(k, int(c) / e.M, 1.0 - tube[k].delta, e.M, int(c)))
    return rep


def check_monotone_concentration(f_mono, d: ProductDistribution, delta: float, M: int, seed: int) -> tuple[float, float]:
    """Empirical mass of [f(lb), f(ub)] under f(x), x ~ d, versus 1 - 2*delta.

    ``[lb, ub]`` is the joint confidence box of ``d`` at level ``delta``;
    ``f_mono`` must be increasing and accept (M, p) batches.
    """
    box = joint_confidence_box(d, delta)
    lo = np.asarray(f_mono(box.lower[None, :]), dtype=np.float64)[0]
    hi = np.asarray(f_mono(box.upper[None, :]), dtype=np.float64)[0]
    x = d.ppf(stream_uniforms(seed, TAG_CHECK, 0, M, 1, d.dim)[:, 0])
    y = np.asarray(f_mono(x), dtype=np.float64)
    inside = np.all((y >= lo) & (y <= hi), axis=1)
    return float(inside.mean()), 1.0 - 2.0 * delta


@dataclass
class OrderReport:
    n_sets: int
    n_violations: int
    max_excess: float  # max over tested U of P_x(U) - P_y(U)
    slack: float
    worst_corners: np.ndarray

    @property
    def holds(self) -> bool:
        return self.n_violations == 0


def check_stochastic_order(samples_x, samples_y, n_upper_sets: int, seed: int, *, sigmas: float = 3.0) -> OrderReport:
    """Falsification test of ``x <=_st y`` on a family of upper sets.

    Half the sets are orthants ``{z >= c}``, the rest unions of two such
    orthants, with corners drawn from the pooled samples.
    """
    X = np.atleast_2d(np.asarray(samples_x, dtype=np.float64))
    Y = np.atleast_2d(np.asarray(samples_y, dtype=np.float64))
    if X.shape[1] != Y.shape[1]:
        raise DimensionError("sample sets differ in dimension")
    rng = np.random.default_rng(seed)
    pool = np.vstack([X, Y])
    c1 = pool[rng.integers(0, pool.shape[0], n_upper_sets)]
    c2 = pool[rng.integers(0, pool.shape[0], n_upper_sets)]
    single = np.arange(n_upper_sets) < (n_upper_sets + 1) // 2

    def masses(Z):
        in1 = np.all(Z[None, :, :] >= c1[:, None, :], axis=2)
        in2 = np.all(Z[None, :, :] >= c2[:, None, :], axis=2)
        member = np.where(single[:, None], in1, in1 | in2)
        return member.mean(axis=1)

    excess = masses(X) - masses(Y)
    slack = sigmas * math.sqrt(0.25 / X.shape[0] + 0.25 / Y.shape[0])
    viol = excess > slack
    worst = int(np.argmax(excess))
    corners = c1[worst][None] if single[worst] else np.vstack([c1[worst], c2[worst]])
    return OrderReport(n_upper_sets, int(viol.sum()), float(excess.max()), slack, corners)
