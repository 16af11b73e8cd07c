"""``stochreach`` command line.

Exit status: 0 success, 1 validation or bound failure, 2 config error,
3 numeric failure.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import kernels
from .config import Scenario, load_scenario
from .errors import ConfigError, ConvergenceError, DecompositionError, NumericalError
from .intervals import hull
from .io import read_tube_csv, write_json, write_trajectories_csv, write_tube_csv
from .montecarlo import binomial_slack, empirical_containment, sample_trajectories
from .reach import ReachTube, run_reachability
from .system import validate_decomposition
from .systems import project_theta

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


def _out_path(path: str, output_dir) -> Path:
    p = Path(path)
    return Path(output_dir) / p.name if output_dir is not None else p


def _default_sibling(sc: Scenario, key: str, default_name: str, output_dir) -> Path:
    outs = sc.outputs
    if key in outs:
        return _out_path(outs[key], output_dir)
    return _out_path(str(Path(outs["summary_path"]).with_name(default_name)), output_dir)


def _load(config_path, seed) -> Scenario:
    sc = load_scenario(config_path)
    if seed is not None:
        sc.raw["seed"] = int(seed)
    return sc


def _tube(sc: Scenario) -> ReachTube:
    return run_reachability(
        sc.system, sc.x0_dist, sc.w_dist, sc.delta0, sc.delta_w, sc.horizon, sc.seed, Ts=sc.Ts
    )


def _thetas(sc: Scenario, tube: ReachTube):
    if sc.kind != "attitude7d":
        return None
    return [project_theta(st.box[1:3]) for st in tube.steps]


def _containment(sc: Scenario, tube: ReachTube):
    M = int(sc.monte_carlo["M"])
    ens = sample_trajectories(sc.system, sc.x0_dist, sc.w_dist, sc.horizon, M, sc.seed)
    return ens, empirical_containment(ens, tube)


def run_scenario(config_path, *, output_dir=None, seed=None) -> int:
    t0 = time.perf_counter()
    sc = _load(config_path, seed)
    tube = _tube(sc)
    thetas = _thetas(sc, tube)
    write_tube_csv(_out_path(sc.outputs["tube_path"], output_dir), tube, thetas)

    summary = {
        "system": sc.kind,
        "seed": sc.seed,
        "delta0": sc.delta0,
        "delta_w": sc.delta_w,
        "horizon": sc.horizon,
        "Ts": sc.Ts,
        "times": [st.time for st in tube.steps],
        "deltas": tube.deltas,
        "prob_lower_bounds": 1.0 - tube.deltas,
        "box_widths": tube.widths,
        "disturbance_box": {"lower": tube.disturbance_box.lower, "upper": tube.disturbance_box.upper},
        "backend": kernels.BACKEND,
    }
    if thetas is not None:
        summary["theta_ranges"] = thetas
    if sc.monte_carlo:
        ens, rep = _containment(sc, tube)
        sigmas = float(sc.monte_carlo.get("sigmas", 3.0))
        summary["monte_carlo"] = {
            "M": ens.M,
            "fractions": rep.fractions,
            "bounds": rep.bounds,
            "slack": binomial_slack(ens.M, sigmas),
            "satisfied": rep.satisfied(sigmas),
        }
        if "trajectories_path" in sc.outputs:
            write_trajectories_csv(_out_path(sc.outputs["trajectories_path"], output_dir), ens.trajectories, sc.Ts)
    summary["wall_clock_seconds"] = time.perf_counter() - t0
    write_json(_out_path(sc.outputs["summary_path"], output_dir), summary)
    return EXIT_OK


def check_decomposition(config_path, *, n_samples=None, seed=None, output_dir=None) -> int:
    sc = _load(config_path, None)
    val = sc.validation
    n = int(n_samples if n_samples is not None else val.get("samples", 1000))
    vseed = int(seed if seed is not None else val.get("seed", 0))
    system = sc.system
    if val.get("domain", "default") == "runtime":
        tube = _tube(sc)
        system = system.with_domains(hull(*(st.box for st in tube.steps)), tube.disturbance_box)
    rep = validate_decomposition(
        system, n, vseed,
        consistency_tol=float(val.get("consistency_tol", 1e-7)),
        monotone_tol=float(val.get("monotone_tol", 1e-9)),
    )
    payload = rep.to_dict()
    payload.update({
        "system": sc.kind,
        "domain": {"lower": system.domain.lower, "upper": system.domain.upper},
        "disturbance_domain": {"lower": system.disturbance_domain.lower, "upper": system.disturbance_domain.upper},
    })
    write_json(_default_sibling(sc, "decomposition_report_path", f"{sc.kind}_decomposition_report.json", output_dir), payload)
    return EXIT_OK if rep.passed else EXIT_FAIL


def mc_validate(config_path, *, output_dir=None, seed=None, tube_path=None) -> int:
    sc = _load(config_path, seed)
    if not sc.monte_carlo:
        raise ConfigError("$.monte_carlo: block required for mc-validate")
    if tube_path is not None:
        tube = read_tube_csv(tube_path)
        if len(tube) != sc.horizon + 1:
            raise ConfigError(f"--tube: {len(tube)} steps, config horizon needs {sc.horizon + 1}")
    else:
        tube = _tube(sc)
    ens, rep = _containment(sc, tube)
    sigmas = float(sc.monte_carlo.get("sigmas", 3.0))
    payload = rep.to_dict(sigmas)
    payload.update({"system": sc.kind, "seed": sc.seed, "M": ens.M, "sigmas": sigmas})
    write_json(_default_sibling(sc, "mc_report_path", f"{sc.kind}_mc_report.json", output_dir), payload)
    return EXIT_OK if rep.satisfied(sigmas) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="stochreach", description="Interval stochastic reach tubes via mixed monotonicity.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, with_seed=True):
        p.add_argument("config", help="scenario JSON (or the name of a shipped config: cwh, attitude7d)")
        p.add_argument("--output-dir", default=None, help="write outputs here, keeping their file names")
        if with_seed:
            p.add_argument("--seed", type=int, default=None, help="override the config seed")

    common(sub.add_parser("reach", help="compute the reach tube and summary"))
    p = sub.add_parser("check-decomposition", help="sample the decomposition conditions")
    common(p)
    p.add_argument("--samples", type=int, default=None)
    p = sub.add_parser("mc-validate", help="check tube containment against Monte Carlo trajectories")
    common(p)
    p.add_argument("--tube", default=None, help="validate this tube CSV instead of recomputing it")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "reach":
            return run_scenario(args.config, output_dir=args.output_dir, seed=args.seed)
        if args.command == "check-decomposition":
            return check_decomposition(args.config, n_samples=args.samples, seed=args.seed, output_dir=args.output_dir)
        return mc_validate(args.config, output_dir=args.output_dir, seed=args.seed, tube_path=args.tube)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalError, DecompositionError, ConvergenceError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
