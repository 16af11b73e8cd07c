"""CSV / JSON emission for tubes, trajectories and reports.

Floats are written with 17 significant digits so every value round-trips
exactly.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .intervals import IntervalVector
from .reach import ReachStep, ReachTube

FLOAT_FMT = "{:.17g}"


def _fmt(v) -> str:
    return FLOAT_FMT.format(float(v))


def tube_header(n: int, with_theta: bool = False) -> list[str]:
    cols = ["k", "t", "delta", "prob_lower_bound"]
    cols += [f"lower_{i}" for i in range(1, n + 1)]
    cols += [f"upper_{i}" for i in range(1, n + 1)]
    cols += [f"nominal_{i}" for i in range(1, n + 1)]
    if with_theta:
        cols += ["theta_lo", "theta_hi"]
    return cols


def write_tube_csv(path, tube: ReachTube, thetas=None) -> None:
    n = tube[0].box.dim
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(tube_header(n, thetas is not None))
        for i, st in enumerate(tube.steps):
            row = [str(st.k), _fmt(st.time), _fmt(st.delta), _fmt(1.0 - st.delta)]
            row += [_fmt(v) for v in st.box.lower]
            row += [_fmt(v) for v in st.box.upper]
            row += [_fmt(v) for v in st.nominal]
            if thetas is not None:
                row += [_fmt(thetas[i][0]), _fmt(thetas[i][1])]
            w.writerow(row)


def read_tube_csv(path, disturbance_box: IntervalVector | None = None) -> ReachTube:
    """Inverse of :func:`write_tube_csv` (theta columns are ignored)."""
    with Path(path).open(newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    n = sum(1 for h in header if h.startswith("lower_"))
    idx = {h: i for i, h in enumerate(header)}
    steps = []
    for r in body:
        lo = np.array([float(r[idx[f"lower_{i}"]]) for i in range(1, n + 1)])
        hi = np.array([float(r[idx[f"upper_{i}"]]) for i in range(1, n + 1)])
        nom = np.array([float(r[idx[f"nominal_{i}"]]) for i in range(1, n + 1)])
        steps.append(ReachStep(int(r[idx["k"]]), float(r[idx["t"]]), IntervalVector(lo, hi), float(r[idx["delta"]]), nom))
    if disturbance_box is None:
        disturbance_box = IntervalVector.universe(1)
    return ReachTube(tuple(steps), disturbance_box)


def write_trajectories_csv(path, trajectories: np.ndarray, Ts: float) -> None:
    """Long format: one row per (m, k)."""
    M, K, n = trajectories.shape
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["m", "k", "t"] + [f"x_{i}" for i in range(1, n + 1)])
        for m in range(M):
            for k in range(K):
                w.writerow([str(m), str(k), _fmt(k * Ts)] + [_fmt(v) for v in trajectories[m, k]])


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def write_json(path, payload: dict) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n")
