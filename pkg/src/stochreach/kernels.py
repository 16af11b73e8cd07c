"""Hot numeric kernels, each with a numba path and a pure-numpy path.

The module-level names (``uniform_block``, ``attitude_step``,
``count_contained``) resolve to the compiled variant unless
``STOCHREACH_DISABLE_JIT`` is set. Both variants stay importable under the
``*_np`` / ``*_nb`` suffixes for tests and ``benchmarks/bench_kernels.py``.
"""

import numpy as np

from ._accel import JIT_ENABLED, njit

__all__ = [
    "BACKEND",
    "uniform_block",
    "attitude_step",
    "count_contained",
    "mask_seed",
]

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV53 = 1.0 / 9007199254740992.0  # 2**-53

_MASK64 = (1 << 64) - 1


def mask_seed(seed):
    """Map any Python int (negative included) onto uint64."""
    return np.uint64(int(seed) & _MASK64)


# ---------------------------------------------------------------------------
# counter-based uniforms: u(seed, tag, m, k, j) in (0, 1)
# ---------------------------------------------------------------------------

def _mix_np(z):
    z = z + _GOLDEN
    z = (z ^ (z >> _S30)) * _MIX1
    z = (z ^ (z >> _S27)) * _MIX2
    return z ^ (z >> _S31)


def _uniform_block_np(seed, tag, m_start, n_traj, n_steps, n_comp):
    seed = mask_seed(seed)
    m = np.arange(n_traj, dtype=np.uint64)[:, None, None] + np.uint64(m_start)
    k = np.arange(n_steps, dtype=np.uint64)[None, :, None]
    j = np.arange(n_comp, dtype=np.uint64)[None, None, :]
    with np.errstate(over="ignore"):
        h = _mix_np(np.full(1, seed, dtype=np.uint64))
        h = _mix_np(h ^ np.uint64(tag))
        h = _mix_np(h ^ m)
        h = _mix_np(h ^ k)
        h = _mix_np(h ^ j)
    return ((h >> _S11).astype(np.float64) + 0.5) * _INV53


@njit
def _mix_nb(z):
    z = z + _GOLDEN
    z = (z ^ (z >> _S30)) * _MIX1
    z = (z ^ (z >> _S27)) * _MIX2
    return z ^ (z >> _S31)


@njit
def _uniform_block_kernel(seed, tag, m_start, n_traj, n_steps, n_comp):
    out = np.empty((n_traj, n_steps, n_comp))
    h0 = _mix_nb(_mix_nb(seed) ^ tag)
    for a in range(n_traj):
        hm = _mix_nb(h0 ^ (m_start + np.uint64(a)))
        for b in range(n_steps):
            hk = _mix_nb(hm ^ np.uint64(b))
            for c in range(n_comp):
                h = _mix_nb(hk ^ np.uint64(c))
                out[a, b, c] = (np.float64(h >> _S11) + 0.5) * _INV53
    return out


def _uniform_block_nb(seed, tag, m_start, n_traj, n_steps, n_comp):
    return _uniform_block_kernel(
        mask_seed(seed), np.uint64(tag), np.uint64(m_start),
        int(n_traj), int(n_steps), int(n_comp),
    )


# ---------------------------------------------------------------------------
# 7-state attitude loop: Euler step of quaternion kinematics + rigid body
# with saturated PD torque
# ---------------------------------------------------------------------------

def _attitude_step_np(X, W, J, Jinv, kp, kd, ts):
    q0, q1, q2, q3 = X[:, 0], X[:, 1], X[:, 2], X[:, 3]
    om = X[:, 4:7]
    Jw = om @ J.T
    cross = np.cross(om, Jw)
    err = np.empty_like(om)
    err[:, 0] = 2.0 * (q2 * q3 + q0 * q1)
    err[:, 1] = 2.0 * (q0 * q2 - q1 * q3)
    err[:, 2] = 0.0
    u_pd = cross - kp * (err @ J.T) - kd * Jw
    u = 0.5 * np.tanh(2.0 * u_pd)
    om_dot = (-cross + u + W) @ Jinv.T
    w1, w2, w3 = om[:, 0], om[:, 1], om[:, 2]
    out = np.empty_like(X)
    out[:, 0] = q0 + ts * 0.5 * (-q1 * w1 - q2 * w2 - q3 * w3)
    out[:, 1] = q1 + ts * 0.5 * (q0 * w1 - q3 * w2 + q2 * w3)
    out[:, 2] = q2 + ts * 0.5 * (q3 * w1 + q0 * w2 - q1 * w3)
    out[:, 3] = q3 + ts * 0.5 * (-q2 * w1 + q1 * w2 + q0 * w3)
    out[:, 4:7] = om + ts * om_dot
    return out


@njit
def _attitude_step_nb(X, W, J, Jinv, kp, kd, ts):
    n = X.shape[0]
    out = np.empty_like(X)
    Jw = np.empty(3)
    cr = np.empty(3)
    err = np.empty(3)
    tau = np.empty(3)
    for r in range(n):
        q0 = X[r, 0]
        q1 = X[r, 1]
        q2 = X[r, 2]
        q3 = X[r, 3]
        w1 = X[r, 4]
        w2 = X[r, 5]
        w3 = X[r, 6]
        for i in range(3):
            Jw[i] = J[i, 0] * w1 + J[i, 1] * w2 + J[i, 2] * w3
        cr[0] = w2 * Jw[2] - w3 * Jw[1]
        cr[1] = w3 * Jw[0] - w1 * Jw[2]
        cr[2] = w1 * Jw[1] - w2 * Jw[0]
        err[0] = 2.0 * (q2 * q3 + q0 * q1)
        err[1] = 2.0 * (q0 * q2 - q1 * q3)
        err[2] = 0.0
        for i in range(3):
            Je = J[i, 0] * err[0] + J[i, 1] * err[1] + J[i, 2] * err[2]
            u_pd = cr[i] - kp * Je - kd * Jw[i]
            tau[i] = -cr[i] + 0.5 * np.tanh(2.0 * u_pd) + W[r, i]
        out[r, 0] = q0 + ts * 0.5 * (-q1 * w1 - q2 * w2 - q3 * w3)
        out[r, 1] = q1 + ts * 0.5 * (q0 * w1 - q3 * w2 + q2 * w3)
        out[r, 2] = q2 + ts * 0.5 * (q3 * w1 + q0 * w2 - q1 * w3)
        out[r, 3] = q3 + ts * 0.5 * (-q2 * w1 + q1 * w2 + q0 * w3)
        for i in range(3):
            acc = Jinv[i, 0] * tau[0] + Jinv[i, 1] * tau[1] + Jinv[i, 2] * tau[2]
            out[r, 4 + i] = X[r, 4 + i] + ts * acc
    return out


# ---------------------------------------------------------------------------
# containment counts per step
# ---------------------------------------------------------------------------

def _count_contained_np(traj, lower, upper):
    inside = np.all((traj >= lower[None]) & (traj <= upper[None]), axis=2)
    return inside.sum(axis=0).astype(np.int64)


@njit
def _count_contained_nb(traj, lower, upper):
    n_traj, n_steps, n = traj.shape
    counts = np.zeros(n_steps, dtype=np.int64)
    for k in range(n_steps):
        for m in range(n_traj):
            ok = True
            for i in range(n):
                v = traj[m, k, i]
                if not (v >= lower[k, i] and v <= upper[k, i]):
                    ok = False
                    break
            if ok:
                counts[k] += 1
    return counts


uniform_block_np = _uniform_block_np
uniform_block_nb = _uniform_block_nb
attitude_step_np = _attitude_step_np
attitude_step_nb = _attitude_step_nb
count_contained_np = _count_contained_np
count_contained_nb = _count_contained_nb

if JIT_ENABLED:
    BACKEND = "numba"
    uniform_block = _uniform_block_nb
    attitude_step = _attitude_step_nb
    count_contained = _count_contained_nb
else:
    BACKEND = "numpy"
    uniform_block = _uniform_block_np
    attitude_step = _attitude_step_np
    count_contained = _count_contained_np
