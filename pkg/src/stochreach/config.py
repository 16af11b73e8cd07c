"""Scenario configuration: JSON schema, parsing and system construction."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from .distributions import Degenerate, Gaussian, ProductDistribution, Uniform
from .errors import ConfigError
from .intervals import IntervalVector
from .system import DecompositionFunction, SearchConfig, StochasticSystem, SystemDynamics, linear_decomposition
from .systems import AttitudeConfig, CwhConfig, build_attitude_system, build_cwh_system

SCHEMA_VERSION = 1

_num = {"type": "number"}
_prob = {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1}
_vec = {"type": "array", "items": _num, "minItems": 1}
_mat = {"type": "array", "items": _vec, "minItems": 1}

_marginal = {
    "oneOf": [
        {
            "type": "object",
            "properties": {"kind": {"const": "gaussian"}, "mean": _num, "std": {"type": "number", "exclusiveMinimum": 0}},
            "required": ["kind", "mean", "std"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {"kind": {"const": "uniform"}, "lo": _num, "hi": _num},
            "required": ["kind", "lo", "hi"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {"kind": {"const": "point"}, "value": _num},
            "required": ["kind", "value"],
            "additionalProperties": False,
        },
    ]
}

_search = {
    "type": "object",
    "properties": {
        "n_interior": {"type": "integer", "minimum": 0},
        "max_corners": {"type": "integer", "minimum": 2},
        "seed": {"type": "integer"},
    },
    "additionalProperties": False,
}

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "system": {"enum": ["cwh", "attitude7d", "custom-linear"]},
        "cwh": {
            "type": "object",
            "properties": {
                "mu": {"type": "number", "exclusiveMinimum": 0},
                "R0": {"type": "number", "exclusiveMinimum": 0},
                "mass": {"type": "number", "exclusiveMinimum": 0},
                "Ts": {"type": "number", "exclusiveMinimum": 0},
                "Q_diag": {**_vec, "minItems": 4, "maxItems": 4},
                "R_diag": {**_vec, "minItems": 2, "maxItems": 2},
                "x0_mean": {**_vec, "minItems": 4, "maxItems": 4},
                "x0_cov_diag": {**_vec, "minItems": 4, "maxItems": 4},
                "w_mean": {**_vec, "minItems": 4, "maxItems": 4},
                "w_cov_diag": {**_vec, "minItems": 4, "maxItems": 4},
            },
            "additionalProperties": False,
        },
        "attitude7d": {
            "type": "object",
            "properties": {
                "J": {"type": "array", "items": {**_vec, "minItems": 3, "maxItems": 3}, "minItems": 3, "maxItems": 3},
                "kp": {"type": "number", "exclusiveMinimum": 0},
                "kd": {"type": "number", "exclusiveMinimum": 0},
                "Ts": {"type": "number", "exclusiveMinimum": 0},
                "x0_mean": {**_vec, "minItems": 7, "maxItems": 7},
                "x0_cov_diag": {**_vec, "minItems": 7, "maxItems": 7},
                "w_cov_diag": {**_vec, "minItems": 3, "maxItems": 3},
                "search": _search,
            },
            "additionalProperties": False,
        },
        "custom-linear": {
            "type": "object",
            "properties": {
                "A": _mat,
                "G": _mat,
                "Ts": {"type": "number", "exclusiveMinimum": 0},
                "x0": {"type": "array", "items": _marginal, "minItems": 1},
                "w": {"type": "array", "items": _marginal, "minItems": 1},
                "domain": {"type": "object", "properties": {"lower": _vec, "upper": _vec},
                           "required": ["lower", "upper"], "additionalProperties": False},
                "disturbance_domain": {"type": "object", "properties": {"lower": _vec, "upper": _vec},
                                       "required": ["lower", "upper"], "additionalProperties": False},
                "decomposition": {"enum": ["sign-split", "swapped"]},
            },
            "required": ["A", "G", "x0", "w"],
            "additionalProperties": False,
        },
        "delta0": _prob,
        "delta_w": _prob,
        "horizon": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer"},
        "monte_carlo": {
            "type": "object",
            "properties": {"M": {"type": "integer", "minimum": 1}, "sigmas": {"type": "number", "exclusiveMinimum": 0}},
            "required": ["M"],
            "additionalProperties": False,
        },
        "validation": {
            "type": "object",
            "properties": {
                "samples": {"type": "integer", "minimum": 1},
                "seed": {"type": "integer"},
                "consistency_tol": {"type": "number", "minimum": 0},
                "monotone_tol": {"type": "number", "minimum": 0},
                "domain": {"enum": ["default", "runtime"]},
            },
            "additionalProperties": False,
        },
        "outputs": {
            "type": "object",
            "properties": {
                "tube_path": {"type": "string"},
                "summary_path": {"type": "string"},
                "trajectories_path": {"type": "string"},
                "decomposition_report_path": {"type": "string"},
                "mc_report_path": {"type": "string"},
            },
            "required": ["tube_path", "summary_path"],
            "additionalProperties": False,
        },
    },
    "required": ["schema_version", "system", "delta0", "delta_w", "horizon", "seed", "outputs"],
    "additionalProperties": False,
    "allOf": [
        {"if": {"properties": {"system": {"const": "custom-linear"}}, "required": ["system"]},
         "then": {"required": ["custom-linear"]}},
    ],
}


@dataclass
class Scenario:
    """A parsed, validated configuration file."""

    raw: dict
    source: Path | None = None
    system: StochasticSystem = field(init=False)
    x0_dist: ProductDistribution = field(init=False)
    w_dist: ProductDistribution = field(init=False)
    Ts: float = field(init=False)

    def __post_init__(self):
        self.system, self.x0_dist, self.w_dist, self.Ts = _build(self.raw)

    kind = property(lambda self: self.raw["system"])
    delta0 = property(lambda self: float(self.raw["delta0"]))
    delta_w = property(lambda self: float(self.raw["delta_w"]))
    horizon = property(lambda self: int(self.raw["horizon"]))
    seed = property(lambda self: int(self.raw["seed"]))
    monte_carlo = property(lambda self: self.raw.get("monte_carlo"))
    validation = property(lambda self: dict(self.raw.get("validation", {})))
    outputs = property(lambda self: dict(self.raw["outputs"]))


def _marginal(entry: dict):
    kind = entry["kind"]
    if kind == "gaussian":
        return Gaussian(float(entry["mean"]), float(entry["std"]))
    if kind == "uniform":
        return Uniform(float(entry["lo"]), float(entry["hi"]))
    return Degenerate(float(entry["value"]))


def _swapped_linear(A, G) -> DecompositionFunction:
    # deliberately wrong: positive and negative parts exchanged
    Ap, An = np.maximum(A, 0.0), np.minimum(A, 0.0)
    Gp, Gn = np.maximum(G, 0.0), np.minimum(G, 0.0)

    def g(z, w, zh, wh):
        return z @ An.T + w @ Gn.T + zh @ Ap.T + wh @ Gp.T

    return DecompositionFunction(g)


def _box(entry, n, what):
    lo, hi = np.asarray(entry["lower"], float), np.asarray(entry["upper"], float)
    if lo.size != n or hi.size != n:
        raise ConfigError(f"{what}: expected {n} entries")
    return IntervalVector(lo, hi)


def _build(raw: dict):
    kind = raw["system"]
    block = raw.get(kind)
    others = {"cwh", "attitude7d", "custom-linear"} - {kind}
    extra = sorted(others & raw.keys())
    if extra:
        raise ConfigError(f"$.{extra[0]}: block does not match system kind {kind!r}")
    block = dict(block or {})
    try:
        if kind == "cwh":
            c = CwhConfig(**block)
            return build_cwh_system(c), c.x0_distribution(), c.w_distribution(), c.Ts
        if kind == "attitude7d":
            search = SearchConfig(**block.pop("search", {}))
            c = AttitudeConfig(**block)
            return build_attitude_system(c, search=search), c.x0_distribution(), c.w_distribution(), c.Ts
        return _build_custom(block)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"$.{kind}: {exc}") from exc


def _build_custom(block):
    A = np.asarray(block["A"], dtype=np.float64)
    G = np.asarray(block["G"], dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ConfigError("$.custom-linear.A: must be a square matrix")
    if G.ndim != 2 or G.shape[0] != A.shape[0]:
        raise ConfigError("$.custom-linear.G: must have as many rows as A")
    n, m = G.shape
    x0 = ProductDistribution([_marginal(s) for s in block["x0"]])
    w = ProductDistribution([_marginal(s) for s in block["w"]])
    if x0.dim != n:
        raise ConfigError(f"$.custom-linear.x0: expected {n} marginals, got {x0.dim}")
    if w.dim != m:
        raise ConfigError(f"$.custom-linear.w: expected {m} marginals, got {w.dim}")
    At, Gt = A.T.copy(), G.T.copy()

    def step(x, ww):
        return x @ At + ww @ Gt

    if block.get("decomposition", "sign-split") == "swapped":
        dec = _swapped_linear(A, G)
    else:
        dec = linear_decomposition(A, G)
    dom = _box(block["domain"], n, "$.custom-linear.domain") if "domain" in block else \
        IntervalVector(-10.0 * np.ones(n), 10.0 * np.ones(n))
    wdom = _box(block["disturbance_domain"], m, "$.custom-linear.disturbance_domain") \
        if "disturbance_domain" in block else IntervalVector(-np.ones(m), np.ones(m))
    sysm = StochasticSystem(SystemDynamics(n, m, step), dec, dom, wdom, name="custom-linear")
    return sysm, x0, w, float(block.get("Ts", 1.0))


def validate_raw(raw) -> None:
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(raw), key=lambda e: list(e.absolute_path))
    if errors:
        msgs = [f"{e.json_path}: {e.message}" for e in errors]
        raise ConfigError("; ".join(msgs))


def shipped_config_path(name: str) -> Path | None:
    stem = name[:-5] if name.endswith(".json") else name
    ref = resources.files("stochreach") / "configs" / f"{stem}.json"
    return Path(str(ref)) if ref.is_file() else None


def load_scenario(path) -> Scenario:
    """Read a config file; bare names such as ``cwh`` resolve to shipped configs."""
    p = Path(path)
    if not p.is_file():
        shipped = shipped_config_path(str(path))
        if shipped is None:
            raise ConfigError(f"config file not found: {path}")
        p = shipped
    try:
        raw = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{p}: invalid JSON ({exc})") from exc
    return scenario_from_dict(raw, source=p)


def scenario_from_dict(raw: dict, source: Path | None = None) -> Scenario:
    validate_raw(raw)
    return Scenario(raw, source)
