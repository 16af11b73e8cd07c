"""Dynamics, decomposition functions, the embedding step and box propagation.

Callables supplied as ``step`` or decomposition ``eval`` must broadcast over
leading axes: ``step(x, w)`` with ``x`` of shape ``(..., n)`` and ``w`` of
shape ``(..., m)`` returns ``(..., n)``. They must also be pure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np
from scipy.stats import qmc

from .errors import DecompositionError, DimensionError, NumericalError
from .intervals import IntervalVector, as_vector

__all__ = [
    "SystemDynamics",
    "DecompositionFunction",
    "StochasticSystem",
    "EmbeddingState",
    "SearchConfig",
    "ConditionResult",
    "ValidationReport",
    "embed_step",
    "propagate_interval",
    "linear_decomposition",
    "tight_decomposition_numeric",
    "validate_decomposition",
]


@dataclass(frozen=True)
class SystemDynamics:
    state_dim: int
    disturbance_dim: int
    step: Callable[[np.ndarray, np.ndarray], np.ndarray]

    def __post_init__(self):
        if self.state_dim < 1 or self.disturbance_dim < 1:
            raise ValueError("dimensions must be positive")

    def __call__(self, x, w):
        return self.step(np.asarray(x, dtype=np.float64), np.asarray(w, dtype=np.float64))


@dataclass(frozen=True)
class DecompositionFunction:
    """``g(x, w, x_hat, w_hat)``.

    ``ordered_only`` marks decompositions that are only defined when
    ``(x, w)`` and ``(x_hat, w_hat)`` are comparable; the validator then
    samples its fixed hat point in a chain with the ordered pair.
    """

    eval: Callable[[np.ndarray, np.ndarray, np.ndarray, np.ndarray], np.ndarray]
    ordered_only: bool = False

    def __call__(self, x, w, xh, wh):
        f64 = np.float64
        return self.eval(np.asarray(x, f64), np.asarray(w, f64), np.asarray(xh, f64), np.asarray(wh, f64))


@dataclass(frozen=True)
class StochasticSystem:
    dynamics: SystemDynamics
    decomposition: DecompositionFunction
    domain: IntervalVector
    disturbance_domain: IntervalVector
    name: str = "system"
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.domain.dim != self.dynamics.state_dim:
            raise DimensionError(f"domain has dim {self.domain.dim}, state_dim is {self.dynamics.state_dim}")
        if self.disturbance_domain.dim != self.dynamics.disturbance_dim:
            raise DimensionError(
                f"disturbance_domain has dim {self.disturbance_domain.dim}, "
                f"disturbance_dim is {self.dynamics.disturbance_dim}"
            )

    @property
    def state_dim(self) -> int:
        return self.dynamics.state_dim

    @property
    def disturbance_dim(self) -> int:
        return self.dynamics.disturbance_dim

    def with_domains(self, domain: IntervalVector, disturbance_domain: IntervalVector | None = None) -> StochasticSystem:
        return replace(
            self,
            domain=domain,
            disturbance_domain=self.disturbance_domain if disturbance_domain is None else disturbance_domain,
        )


@dataclass(frozen=True)
class EmbeddingState:
    x: np.ndarray
    x_hat: np.ndarray

    def __post_init__(self):
        x = as_vector(self.x, name="x")
        xh = as_vector(self.x_hat, name="x_hat")
        if x.shape != xh.shape:
            raise DimensionError("x and x_hat differ in dimension")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "x_hat", xh)


def _require_finite(v: np.ndarray, what: str):
    bad = ~np.isfinite(v)
    if bad.any():
        idx = np.flatnonzero(bad.reshape(-1)) % v.shape[-1]
        raise NumericalError(f"{what}: non-finite value in component(s) {sorted(set(idx.tolist()))}")


def _check_args(s: StochasticSystem, x, w):
    if np.shape(x)[-1] != s.state_dim:
        raise DimensionError(f"state has dim {np.shape(x)[-1]}, expected {s.state_dim}")
    if np.shape(w)[-1] != s.disturbance_dim:
        raise DimensionError(f"disturbance has dim {np.shape(w)[-1]}, expected {s.disturbance_dim}")


def embed_step(s: StochasticSystem, e: EmbeddingState, w, w_hat) -> EmbeddingState:
    """One step of the doubled system: (g(x,w,x^,w^), g(x^,w^,x,w))."""
    w = np.asarray(w, dtype=np.float64)
    w_hat = np.asarray(w_hat, dtype=np.float64)
    _check_args(s, e.x, w)
    _check_args(s, e.x_hat, w_hat)
    g = s.decomposition
    nx = np.asarray(g(e.x, w, e.x_hat, w_hat), dtype=np.float64)
    nxh = np.asarray(g(e.x_hat, w_hat, e.x, w), dtype=np.float64)
    _require_finite(nx, "embed_step x")
    _require_finite(nxh, "embed_step x_hat")
    return EmbeddingState(nx, nxh)


def propagate_interval(s: StochasticSystem, X: IntervalVector, W: IntervalVector) -> IntervalVector:
    """Box enclosing f(X, W): [g(xl, wl, xu, wu), g(xu, wu, xl, wl)]."""
    _check_args(s, X.lower, W.lower)
    g = s.decomposition
    lo = np.asarray(g(X.lower, W.lower, X.upper, W.upper), dtype=np.float64)
    hi = np.asarray(g(X.upper, W.upper, X.lower, W.lower), dtype=np.float64)
    _require_finite(lo, "propagate_interval lower")
    _require_finite(hi, "propagate_interval upper")
    if np.any(lo > hi):
        bad = np.flatnonzero(lo > hi).tolist()
        raise DecompositionError(
            f"decomposition produced lower > upper in components {bad}; it is not a valid decomposition"
        )
    return IntervalVector(lo, hi)


def linear_decomposition(A_hat, G) -> DecompositionFunction:
    """Exact decomposition of ``x+ = A_hat x + G w`` by sign-splitting."""
    A_hat = np.array(A_hat, dtype=np.float64)
    G = np.array(G, dtype=np.float64)
    if A_hat.ndim != 2 or A_hat.shape[0] != A_hat.shape[1]:
        raise DimensionError("A_hat must be square")
    if G.ndim != 2 or G.shape[0] != A_hat.shape[0]:
        raise DimensionError("G must have as many rows as A_hat")
    Ap, An = np.maximum(A_hat, 0.0), np.minimum(A_hat, 0.0)
    Gp, Gn = np.maximum(G, 0.0), np.minimum(G, 0.0)

    def g(z, w, zh, wh):
        return z @ Ap.T + w @ Gp.T + zh @ An.T + wh @ Gn.T

    return DecompositionFunction(g)


@dataclass(frozen=True)
class SearchConfig:
    """Sampling budget for :func:`tight_decomposition_numeric`.

    Box corners are always evaluated (up to ``max_corners``; above that a
    fixed random subset is used) together with ``n_interior`` scrambled Sobol
    points.
    """

    n_interior: int = 200
    max_corners: int = 4096
    seed: int = 0
    chunk: int = 256


def _unit_points(dim: int, search: SearchConfig) -> np.ndarray:
    if 2 ** dim <= search.max_corners:
        corners = np.array(list(itertools.product((0.0, 1.0), repeat=dim)))
    else:
        rng = np.random.default_rng(search.seed)
        corners = rng.integers(0, 2, size=(search.max_corners, dim)).astype(np.float64)
        corners[0] = 0.0
        corners[1] = 1.0
    if search.n_interior > 0:
        sob = qmc.Sobol(d=dim, scramble=True, seed=search.seed)
        # Sobol balance properties want a power of two; keep the first n
        m = int(np.ceil(np.log2(max(search.n_interior, 2))))
        interior = sob.random_base2(m)[: search.n_interior]
        return np.vstack([corners, interior])
    return corners


def tight_decomposition_numeric(dyn: SystemDynamics, search: SearchConfig | None = None) -> DecompositionFunction:
    """Sampled tight decomposition.

    For ``(x, w) <= (x_hat, w_hat)`` component i is the smallest value of
    ``f_i`` found on the box between the two points; for the reverse order it
    is the largest. The search uses box corners plus interior quasi-random
    points, so the extremum can be under-estimated by a sampling gap; use
    :func:`validate_decomposition` to measure it.
    """
    search = search or SearchConfig()
    n, m = dyn.state_dim, dyn.disturbance_dim
    unit = _unit_points(n + m, search)

    def g(x, w, xh, wh):
        z = np.concatenate([x, w], axis=-1)
        zh = np.concatenate([xh, wh], axis=-1)
        z, zh = np.broadcast_arrays(z, zh)
        lead = z.shape[:-1]
        z2 = z.reshape(-1, n + m)
        zh2 = zh.reshape(-1, n + m)
        below = np.all(z2 <= zh2, axis=1)
        above = np.all(z2 >= zh2, axis=1)
        if not np.all(below | above):
            raise DecompositionError(
                "tight decomposition evaluated at mixed-order arguments; "
                "(x, w) and (x_hat, w_hat) must be comparable"
            )
        out = np.empty((z2.shape[0], n))
        for start in range(0, z2.shape[0], search.chunk):
            sl = slice(start, start + search.chunk)
            lo = np.minimum(z2[sl], zh2[sl])
            span = np.abs(zh2[sl] - z2[sl])
            pts = lo[:, None, :] + unit[None, :, :] * span[:, None, :]
            vals = dyn.step(pts[..., :n].reshape(-1, n), pts[..., n:].reshape(-1, m))
            vals = np.asarray(vals).reshape(pts.shape[0], unit.shape[0], n)
            out[sl] = np.where(below[sl, None], vals.min(axis=1), vals.max(axis=1))
        return out.reshape(*lead, n)

    return DecompositionFunction(g, ordered_only=True)


@dataclass
class ConditionResult:
    samples: int
    violations: int
    worst: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> dict:
        return {
            "samples": self.samples,
            "violations": self.violations,
            "worst_violation": self.worst,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


@dataclass
class ValidationReport:
    consistency: ConditionResult
    increasing: ConditionResult
    decreasing: ConditionResult
    seed: int

    @property
    def passed(self) -> bool:
        return self.consistency.passed and self.increasing.passed and self.decreasing.passed

    @property
    def worst_monotonicity(self) -> float:
        return max(self.increasing.worst, self.decreasing.worst)

    def to_dict(self) -> dict:
        return {
            "condition_1_consistency": self.consistency.to_dict(),
            "condition_2_increasing": self.increasing.to_dict(),
            "condition_3_decreasing": self.decreasing.to_dict(),
            "passed": self.passed,
            "seed": self.seed,
        }


def _ordered_pairs(rng, lo, hi, n):
    """n pairs a <= b inside [lo, hi]; offsets at most half the width."""
    span = hi - lo
    off = rng.random((n, lo.size)) * 0.5 * span
    a = lo + rng.random((n, lo.size)) * (span - off)
    return a, a + off


def _fixed_points(rng, lo, hi, a, b, chained):
    n = a.shape[0]
    if not chained:
        return lo + rng.random((n, lo.size)) * (hi - lo)
    # place the fixed point below a, between a and b, or above b
    where = rng.integers(0, 3, size=n)[:, None]
    u = rng.random((n, lo.size))
    below = lo + u * (a - lo)
    between = a + u * (b - a)
    above = b + u * (hi - b)
    return np.where(where == 0, below, np.where(where == 1, between, above))


def validate_decomposition(
    s: StochasticSystem,
    n_samples: int,
    seed: int,
    *,
    consistency_tol: float = 1e-7,
    monotone_tol: float = 1e-9,
) -> ValidationReport:
    """Sampled check of the three decomposition conditions on ``s.domain``.

    Violations are counted and reported, never raised.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be positive")
    if not (s.domain.is_finite() and s.disturbance_domain.is_finite()):
        raise ValueError("validation needs finite domain boxes")
    rng = np.random.default_rng(seed)
    n, m = s.state_dim, s.disturbance_dim
    lo = np.concatenate([s.domain.lower, s.disturbance_domain.lower])
    hi = np.concatenate([s.domain.upper, s.disturbance_domain.upper])
    g = s.decomposition
    f = s.dynamics
    chained = g.ordered_only

    def split(z):
        return z[:, :n], z[:, n:]

    # condition 1: g(x, w, x, w) == f(x, w)
    z = lo + rng.random((n_samples, n + m)) * (hi - lo)
    x, w = split(z)
    err = np.max(np.abs(g(x, w, x, w) - f(x, w)), axis=1)
    cond1 = ConditionResult(n_samples, int(np.sum(err > consistency_tol)), float(err.max()), consistency_tol)

    # condition 2: increasing in (x, w) for fixed (x_hat, w_hat)
    a, b = _ordered_pairs(rng, lo, hi, n_samples)
    c = _fixed_points(rng, lo, hi, a, b, chained)
    xa, wa = split(a)
    xb, wb = split(b)
    xc, wc = split(c)
    gap = np.max(g(xa, wa, xc, wc) - g(xb, wb, xc, wc), axis=1)
    worst2 = float(max(gap.max(), 0.0))
    cond2 = ConditionResult(n_samples, int(np.sum(gap > monotone_tol)), worst2, monotone_tol)

    # condition 3: decreasing in (x_hat, w_hat) for fixed (x, w)
    a, b = _ordered_pairs(rng, lo, hi, n_samples)
    c = _fixed_points(rng, lo, hi, a, b, chained)
    xa, wa = split(a)
    xb, wb = split(b)
    xc, wc = split(c)
    gap = np.max(g(xc, wc, xb, wb) - g(xc, wc, xa, wa), axis=1)
    worst3 = float(max(gap.max(), 0.0))
    cond3 = ConditionResult(n_samples, int(np.sum(gap > monotone_tol)), worst3, monotone_tol)

    return ValidationReport(cond1, cond2, cond3, seed)
