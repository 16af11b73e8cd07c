"""Interval reach tubes with a per-step probability lower bound."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .distributions import TAG_W, TAG_X0, ProductDistribution, joint_confidence_box, stream_uniforms
from .errors import DecompositionError, DimensionError, NumericalError
from .intervals import IntervalVector, width
from .system import StochasticSystem, propagate_interval

__all__ = ["ReachStep", "ReachTube", "delta_update", "run_reachability"]


def delta_update(delta_k: float, delta_w: float) -> float:
    """Miss probability after one step.

    The one-step loss doubles the state miss probability and then folds in
    the disturbance box miss; ``1 - 2*delta_k`` is floored at zero so the
    bound never goes negative.
    """
    for name, v in (("delta_k", delta_k), ("delta_w", delta_w)):
        if not (0.0 <= v <= 1.0):
            raise ValueError(f"{name} must lie in [0, 1], got {v}")
    keep = max(1.0 - 2.0 * delta_k, 0.0) * (1.0 - delta_w)
    return min(max(1.0 - keep, 0.0), 1.0)


@dataclass(frozen=True)
class ReachStep:
    k: int
    time: float
    box: IntervalVector
    delta: float
    nominal: np.ndarray

    @property
    def prob_lower_bound(self) -> float:
        return 1.0 - self.delta


@dataclass(frozen=True)
class ReachTube:
    steps: tuple
    disturbance_box: IntervalVector

    def __post_init__(self):
        deltas = [s.delta for s in self.steps]
        if any(b < a for a, b in zip(deltas, deltas[1:])):
            raise ValueError("delta sequence must be nondecreasing")

    def __len__(self):
        return len(self.steps)

    def __getitem__(self, k) -> ReachStep:
        return self.steps[k]

    @property
    def deltas(self) -> np.ndarray:
        return np.array([s.delta for s in self.steps])

    @property
    def lowers(self) -> np.ndarray:
        return np.array([s.box.lower for s in self.steps])

    @property
    def uppers(self) -> np.ndarray:
        return np.array([s.box.upper for s in self.steps])

    @property
    def nominal(self) -> np.ndarray:
        return np.array([s.nominal for s in self.steps])

    @property
    def widths(self) -> np.ndarray:
        return np.array([width(s.box) for s in self.steps])


_EPS = np.finfo(np.float64).eps


def _outward(box: IntervalVector) -> IntervalVector:
    """Widen by a few ulps so rounding in g versus f cannot eject a state."""
    pad = 4.0 * _EPS * np.maximum(np.abs(box.lower), np.abs(box.upper))
    return IntervalVector(
        np.nextafter(box.lower - pad, -np.inf), np.nextafter(box.upper + pad, np.inf)
    )


def run_reachability(
    s: StochasticSystem,
    x0_dist: ProductDistribution,
    w_dist: ProductDistribution,
    delta0: float,
    delta_w: float,
    N: int,
    seed: int,
    *,
    Ts: float = 1.0,
) -> ReachTube:
    """Propagate the initial confidence box for N steps.

    The disturbance box is computed once and reused at every step. The
    nominal path is trajectory 0 of the seeded Monte Carlo stream, so
    ``sample_trajectories(..., M=1, master_seed=seed)`` reproduces it.
    Each propagated box is widened outward by a few ulps.
    """
    for name, v in (("delta0", delta0), ("delta_w", delta_w)):
        if not (0.0 < v < 1.0):
            raise ValueError(f"{name} must lie in (0, 1), got {v}")
    if N < 1:
        raise ValueError("N must be positive")
    if x0_dist.dim != s.state_dim:
        raise DimensionError(f"x0 distribution has dim {x0_dist.dim}, system state_dim is {s.state_dim}")
    if w_dist.dim != s.disturbance_dim:
        raise DimensionError(f"w distribution has dim {w_dist.dim}, system disturbance_dim is {s.disturbance_dim}")

    x = x0_dist.ppf(stream_uniforms(seed, TAG_X0, 0, 1, 1, x0_dist.dim)[0, 0])
    ws = w_dist.ppf(stream_uniforms(seed, TAG_W, 0, 1, N, w_dist.dim)[0])
    box = joint_confidence_box(x0_dist, delta0)
    W = joint_confidence_box(w_dist, delta_w)
    delta = float(delta0)

    steps = [ReachStep(0, 0.0, box, delta, x)]
    for k in range(N):
        x = np.asarray(s.dynamics(x, ws[k]), dtype=np.float64)
        if not np.isfinite(x).all():
            raise NumericalError(f"nominal trajectory became non-finite at step {k + 1}")
        try:
            box = _outward(propagate_interval(s, box, W))
        except (NumericalError, DecompositionError) as exc:
            raise type(exc)(f"step {k + 1}: {exc}") from exc
        delta = delta_update(delta, delta_w)
        steps.append(ReachStep(k + 1, (k + 1) * Ts, box, delta, x))
    return ReachTube(tuple(steps), W)
