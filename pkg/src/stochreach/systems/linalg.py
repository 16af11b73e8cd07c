"""Zero-order-hold discretization and discrete LQR."""

import numpy as np
from scipy.linalg import expm

from ..errors import ConvergenceError

__all__ = ["zoh_discretize", "dare_iterate", "dlqr"]


def zoh_discretize(A, B, Ts):
    """Exact discretization under piecewise-constant input.

    Uses the block exponential ``exp(Ts * [[A, B], [0, 0]])``.
    """
    A = np.atleast_2d(np.asarray(A, dtype=np.float64))
    B = np.asarray(B, dtype=np.float64)
    if B.ndim == 1:
        B = B[:, None]
    if Ts <= 0:
        raise ValueError("Ts must be positive")
    n, m = A.shape[0], B.shape[1]
    M = np.zeros((n + m, n + m))
    M[:n, :n] = A
    M[:n, n:] = B
    E = expm(Ts * M)
    return E[:n, :n], E[:n, n:]


def dare_iterate(Ad, Bd, Q, R, *, tol=1e-11, max_iter=100_000):
    """Riccati value iteration from P = Q to the DARE fixed point.

    Stops once ``||P_{i+1} - P_i||_inf <= tol``.
    """
    Ad = np.atleast_2d(np.asarray(Ad, dtype=np.float64))
    Bd = np.atleast_2d(np.asarray(Bd, dtype=np.float64))
    Q = np.atleast_2d(np.asarray(Q, dtype=np.float64))
    R = np.atleast_2d(np.asarray(R, dtype=np.float64))
    P = Q.copy()
    for it in range(1, max_iter + 1):
        BtP = Bd.T @ P
        gain = np.linalg.solve(R + BtP @ Bd, BtP @ Ad)
        P_next = Q + Ad.T @ P @ Ad - Ad.T @ P @ Bd @ gain
        P_next = 0.5 * (P_next + P_next.T)
        diff = np.max(np.abs(P_next - P))
        P = P_next
        if diff <= tol:
            return P, it
    raise ConvergenceError(f"Riccati iteration did not converge in {max_iter} iterations (last step {diff:.3e})")


def dlqr(Ad, Bd, Q, R, **kwargs):
    """State-feedback gain K (u = -K x) of the infinite-horizon discrete LQR."""
    P, _ = dare_iterate(Ad, Bd, Q, R, **kwargs)
    Bd = np.atleast_2d(np.asarray(Bd, dtype=np.float64))
    R = np.atleast_2d(np.asarray(R, dtype=np.float64))
    Ad = np.atleast_2d(np.asarray(Ad, dtype=np.float64))
    K = np.linalg.solve(R + Bd.T @ P @ Bd, Bd.T @ P @ Ad)
    rho = np.max(np.abs(np.linalg.eigvals(Ad - Bd @ K)))
    if not rho < 1.0:
        raise ConvergenceError(f"closed loop is not stable (spectral radius {rho:.6f})")
    return K
