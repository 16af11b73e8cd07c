"""Independent product distributions, equal-tail boxes and seeded sampling.

Every random draw goes through the counter-based stream in
:mod:`stochreach.kernels`: the uniform for trajectory ``m``, step ``k``,
component ``j`` is a pure function of ``(seed, tag, m, k, j)``, and
Gaussian draws are inverse-CDF transforms of those uniforms. Results are
therefore independent of batching and evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import ndtr, ndtri

from . import kernels
from .intervals import IntervalVector

__all__ = [
    "Gaussian",
    "Uniform",
    "Degenerate",
    "ProductDistribution",
    "cdf",
    "quantile",
    "equal_tail_interval",
    "joint_confidence_box",
    "per_component_confidence",
    "sample",
    "stream_uniforms",
    "TAG_X0",
    "TAG_W",
]

# stream tags, so initial-state and disturbance draws never share uniforms
TAG_X0 = 0
TAG_W = 1


def _check_prob(p, what="p"):
    p = np.asarray(p, dtype=np.float64)
    if np.any(~((p > 0.0) & (p < 1.0))):
        raise ValueError(f"{what} must lie strictly inside (0, 1), got {p}")
    return p


@dataclass(frozen=True)
class Gaussian:
    mean: float
    std: float

    def __post_init__(self):
        if not (math.isfinite(self.mean) and math.isfinite(self.std)):
            raise ValueError("Gaussian parameters must be finite")
        if not self.std > 0:
            raise ValueError(f"Gaussian std must be > 0, got {self.std}")

    def cdf(self, x):
        return ndtr((np.asarray(x, dtype=np.float64) - self.mean) / self.std)

    def ppf(self, p):
        return self.mean + self.std * ndtri(p)

    @property
    def support(self):
        return (-math.inf, math.inf)


@dataclass(frozen=True)
class Uniform:
    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError("Uniform bounds must be finite")
        if not self.lo < self.hi:
            raise ValueError(f"Uniform needs lo < hi, got [{self.lo}, {self.hi}]")

    def cdf(self, x):
        x = np.asarray(x, dtype=np.float64)
        return np.clip((x - self.lo) / (self.hi - self.lo), 0.0, 1.0)

    def ppf(self, p):
        p = np.asarray(p, dtype=np.float64)
        # clip guards against lo + p*(hi-lo) rounding past hi for tiny widths
        return np.clip(self.lo + p * (self.hi - self.lo), self.lo, self.hi)

    @property
    def support(self):
        return (self.lo, self.hi)


@dataclass(frozen=True)
class Degenerate:
    """Point mass. Used for deterministic components and zero-width tests."""

    value: float

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValueError("Degenerate value must be finite")

    def cdf(self, x):
        return (np.asarray(x, dtype=np.float64) >= self.value).astype(np.float64)

    def ppf(self, p):
        return np.full_like(np.asarray(p, dtype=np.float64), self.value)

    @property
    def support(self):
        return (self.value, self.value)


Marginal = Gaussian | Uniform | Degenerate


@dataclass(frozen=True)
class ProductDistribution:
    marginals: tuple

    def __init__(self, marginals: Sequence[Marginal]):
        marginals = tuple(marginals)
        if not marginals:
            raise ValueError("ProductDistribution needs at least one marginal")
        for m in marginals:
            if not isinstance(m, (Gaussian, Uniform, Degenerate)):
                raise TypeError(f"unsupported marginal {m!r}")
        object.__setattr__(self, "marginals", marginals)

    @classmethod
    def gaussian(cls, mean, var_diag) -> ProductDistribution:
        """Diagonal-covariance Gaussian; zero variances become point masses."""
        mean = np.asarray(mean, dtype=np.float64).reshape(-1)
        var = np.asarray(var_diag, dtype=np.float64).reshape(-1)
        if mean.shape != var.shape:
            raise ValueError("mean and variance diagonal differ in length")
        if np.any(var < 0):
            raise ValueError("variances must be >= 0")
        return cls(
            Gaussian(float(mu), math.sqrt(v)) if v > 0 else Degenerate(float(mu))
            for mu, v in zip(mean, var)
        )

    @property
    def dim(self) -> int:
        return len(self.marginals)

    def ppf(self, u: np.ndarray) -> np.ndarray:
        """Map uniforms of shape (..., dim) through the marginal quantiles."""
        u = np.asarray(u, dtype=np.float64)
        out = np.empty_like(u)
        for j, m in enumerate(self.marginals):
            out[..., j] = m.ppf(u[..., j])
        return out

    def box_mass(self, box: IntervalVector) -> float:
        """Exact probability of a box under the product measure."""
        mass = 1.0
        for m, lo, hi in zip(self.marginals, box.lower, box.upper):
            if isinstance(m, Degenerate):
                mass *= float(lo <= m.value <= hi)
            else:
                mass *= float(m.cdf(hi) - m.cdf(lo))
        return mass


def cdf(m: Marginal, x):
    out = m.cdf(x)
    return float(out) if np.ndim(out) == 0 else out


def quantile(m: Marginal, p):
    p = _check_prob(p)
    out = m.ppf(p)
    return float(out) if np.ndim(out) == 0 else out


def equal_tail_interval(m: Marginal, confidence: float) -> tuple[float, float]:
    _check_prob(confidence, "confidence")
    return (float(m.ppf((1.0 - confidence) / 2.0)), float(m.ppf((1.0 + confidence) / 2.0)))


def per_component_confidence(delta: float, p: int) -> float:
    """Per-marginal confidence c with c**p == 1 - delta."""
    # 1 - (1-delta)**(1/p) via expm1/log1p, accurate for tiny delta
    return -math.expm1(math.log1p(-delta) / p) if delta > 0 else 1.0


def joint_confidence_box(d: ProductDistribution, delta: float) -> IntervalVector:
    """Equal-tail box whose product mass is exactly ``1 - delta``."""
    _check_prob(delta, "delta")
    miss = per_component_confidence(delta, d.dim)
    lo = np.empty(d.dim)
    hi = np.empty(d.dim)
    for j, m in enumerate(d.marginals):
        lo[j] = m.ppf(0.5 * miss)
        hi[j] = m.ppf(1.0 - 0.5 * miss)
    return IntervalVector(lo, hi)


def stream_uniforms(seed: int, tag: int, m_start: int, n_traj: int, n_steps: int, n_comp: int) -> np.ndarray:
    return kernels.uniform_block(seed, tag, m_start, n_traj, n_steps, n_comp)


def sample(d: ProductDistribution, seed: int, *, tag: int = TAG_X0, m: int = 0, k: int = 0) -> np.ndarray:
    """One draw from ``d`` on the sub-stream ``(seed, tag, m, k)``."""
    u = stream_uniforms(seed, tag, m, 1, k + 1, d.dim)[0, k]
    return d.ppf(u)
