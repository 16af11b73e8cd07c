"""Componentwise orders and axis-aligned boxes."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError

__all__ = [
    "as_vector",
    "leq",
    "southeast_leq",
    "IntervalVector",
    "contains",
    "width",
    "hull",
]


def as_vector(v, *, allow_inf: bool = False, name: str = "vector") -> np.ndarray:
    """Coerce to a 1-D float64 array and reject NaN (and inf unless allowed)."""
    arr = np.array(v, dtype=np.float64, copy=True).reshape(-1)
    if np.isnan(arr).any():
        raise ValueError(f"{name} contains NaN")
    if not allow_inf and not np.isfinite(arr).all():
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def _check_dims(*vs):
    n = vs[0].shape[-1]
    for v in vs[1:]:
        if v.shape[-1] != n:
            raise DimensionError(f"dimension mismatch: {n} vs {v.shape[-1]}")


def leq(a, b) -> bool:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return bool(np.all(a <= b))


def southeast_leq(pair1, pair2) -> bool:
    """(x, x_hat) <=_SE (y, y_hat)  iff  x <= y and x_hat >= y_hat."""
    x, xh = (np.asarray(v, dtype=np.float64) for v in pair1)
    y, yh = (np.asarray(v, dtype=np.float64) for v in pair2)
    if not (x.shape == xh.shape == y.shape == yh.shape):
        raise DimensionError("southeast_leq needs four vectors of equal dimension")
    return bool(np.all(x <= y) and np.all(xh >= yh))


@dataclass(frozen=True, eq=False)
class IntervalVector:
    """Closed box ``[lower, upper]``. Infinite edges are allowed as sentinels."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = as_vector(self.lower, allow_inf=True, name="lower")
        hi = as_vector(self.upper, allow_inf=True, name="upper")
        if lo.shape != hi.shape:
            raise DimensionError(f"lower has {lo.size} entries, upper has {hi.size}")
        if np.any(lo > hi):
            bad = np.flatnonzero(lo > hi)
            raise ValueError(f"lower > upper at components {bad.tolist()}")
        lo.flags.writeable = False
        hi.flags.writeable = False
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @classmethod
    def point(cls, c) -> IntervalVector:
        c = as_vector(c)
        return cls(c, c)

    @classmethod
    def universe(cls, n: int) -> IntervalVector:
        return cls(np.full(n, -np.inf), np.full(n, np.inf))

    @property
    def dim(self) -> int:
        return self.lower.size

    @property
    def center(self) -> np.ndarray:
        return 0.5 * (self.lower + self.upper)

    def is_finite(self) -> bool:
        return bool(np.isfinite(self.lower).all() and np.isfinite(self.upper).all())

    def subset_of(self, other: IntervalVector, tol: float = 0.0) -> bool:
        _check_dims(self.lower, other.lower)
        return bool(np.all(other.lower - tol <= self.lower) and np.all(self.upper <= other.upper + tol))

    def __getitem__(self, idx) -> IntervalVector:
        return IntervalVector(self.lower[idx], self.upper[idx])

    def __eq__(self, other):
        if not isinstance(other, IntervalVector):
            return NotImplemented
        return np.array_equal(self.lower, other.lower) and np.array_equal(self.upper, other.upper)

    def __repr__(self):
        return f"IntervalVector(lower={self.lower.tolist()}, upper={self.upper.tolist()})"


def contains(box: IntervalVector, point) -> bool:
    p = np.asarray(point, dtype=np.float64).reshape(-1)
    _check_dims(box.lower, p)
    return bool(np.all(box.lower <= p) and np.all(p <= box.upper))


def width(box: IntervalVector) -> np.ndarray:
    return box.upper - box.lower


def hull(*boxes: IntervalVector) -> IntervalVector:
    """Smallest box containing all arguments."""
    if not boxes:
        raise ValueError("hull of nothing")
    _check_dims(*(b.lower for b in boxes))
    lo = np.min([b.lower for b in boxes], axis=0)
    hi = np.max([b.upper for b in boxes], axis=0)
    return IntervalVector(lo, hi)
