import csv
import json
import math

import numpy as np
import pytest

from stochreach.cli import EXIT_CONFIG, EXIT_FAIL, EXIT_NUMERIC, EXIT_OK, main
from stochreach.config import SCHEMA, load_scenario, scenario_from_dict, shipped_config_path
from stochreach.errors import ConfigError
from stochreach.io import read_tube_csv, tube_header, write_tube_csv

CWH_DELTAS = [0.05, 0.145, 0.3255, 0.66845, 1.0, 1.0]


def _custom(tmp_path, name="lin", **over):
    raw = {
        "schema_version": 1,
        "system": "custom-linear",
        "custom-linear": {
            "A": [[0.5, -0.8], [0.3, 0.9]],
            "G": [[1.0], [0.0]],
            "Ts": 1.0,
            "x0": [{"kind": "gaussian", "mean": 1.0, "std": 0.2}, {"kind": "uniform", "lo": -1.0, "hi": 1.0}],
            "w": [{"kind": "gaussian", "mean": 0.0, "std": 0.1}],
        },
        "delta0": 0.05,
        "delta_w": 0.05,
        "horizon": 4,
        "seed": 5,
        "monte_carlo": {"M": 2000},
        "validation": {"samples": 1000, "seed": 0},
        "outputs": {"tube_path": f"{name}_tube.csv", "summary_path": f"{name}_summary.json"},
    }
    for k, v in over.items():
        if k == "block":
            raw["custom-linear"].update(v)
        elif v is None:
            raw.pop(k)
        else:
            raw[k] = v
    p = tmp_path / f"{name}.json"
    p.write_text(json.dumps(raw))
    return p


def _read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


@pytest.fixture(scope="module")
def cwh_run(tmp_path_factory):
    d = tmp_path_factory.mktemp("cwh")
    assert main(["reach", "cwh", "--output-dir", str(d)]) == EXIT_OK
    return d


def test_cwh_reach_summary(cwh_run):
    summary = json.loads((cwh_run / "cwh_summary.json").read_text())
    assert np.max(np.abs(np.array(summary["deltas"]) - CWH_DELTAS)) <= 1e-12
    assert summary["seed"] == 20231
    assert summary["times"] == [0, 20, 40, 60, 80, 100]
    assert summary["monte_carlo"]["satisfied"] is True
    assert summary["monte_carlo"]["fractions"][5] > 0.5
    assert summary["wall_clock_seconds"] > 0
    assert len(summary["box_widths"]) == 6


def test_cwh_tube_csv_layout(cwh_run):
    rows = _read_csv(cwh_run / "cwh_tube.csv")
    assert rows[0] == tube_header(4)
    assert all(len(r) == 4 + 3 * 4 for r in rows)
    assert len(rows) == 7
    tube = read_tube_csv(cwh_run / "cwh_tube.csv")
    assert np.allclose(tube.deltas, CWH_DELTAS, atol=1e-12)
    probs = [float(r[3]) for r in rows[1:]]
    assert probs[4] == 0.0 and probs[3] > 0


def test_cwh_trajectories_csv(cwh_run):
    rows = _read_csv(cwh_run / "cwh_trajectories.csv")
    assert rows[0] == ["m", "k", "t", "x_1", "x_2", "x_3", "x_4"]
    assert len(rows) == 1 + 10_000 * 6


def test_reach_is_bit_identical(tmp_path, cwh_run):
    assert main(["reach", "cwh", "--output-dir", str(tmp_path)]) == EXIT_OK
    for name in ("cwh_tube.csv", "cwh_trajectories.csv"):
        assert (tmp_path / name).read_bytes() == (cwh_run / name).read_bytes()
    a = json.loads((tmp_path / "cwh_summary.json").read_text())
    b = json.loads((cwh_run / "cwh_summary.json").read_text())
    a.pop("wall_clock_seconds")
    b.pop("wall_clock_seconds")
    assert a == b


def test_seed_override_changes_nominal_only(tmp_path, cwh_run):
    assert main(["reach", "cwh", "--output-dir", str(tmp_path), "--seed", "1"]) == EXIT_OK
    a = read_tube_csv(tmp_path / "cwh_tube.csv")
    b = read_tube_csv(cwh_run / "cwh_tube.csv")
    assert np.array_equal(a.lowers, b.lowers) and not np.array_equal(a.nominal, b.nominal)
    assert json.loads((tmp_path / "cwh_summary.json").read_text())["seed"] == 1


def test_float_format_round_trips(tmp_path, cwh_tube):
    p = tmp_path / "t.csv"
    write_tube_csv(p, cwh_tube)
    back = read_tube_csv(p)
    assert np.array_equal(back.lowers, cwh_tube.lowers)
    assert np.array_equal(back.uppers, cwh_tube.uppers)
    assert np.array_equal(back.nominal, cwh_tube.nominal)


def test_check_decomposition_cwh(tmp_path):
    assert main(["check-decomposition", "cwh", "--output-dir", str(tmp_path)]) == EXIT_OK
    rep = json.loads((tmp_path / "cwh_decomposition_report.json").read_text())
    assert rep["passed"] and rep["condition_2_increasing"]["violations"] == 0
    assert rep["condition_1_consistency"]["samples"] == 1000


def test_check_decomposition_broken_fixture(tmp_path):
    cfg = _custom(tmp_path, block={"decomposition": "swapped"})
    assert main(["check-decomposition", str(cfg), "--output-dir", str(tmp_path), "--samples", "1000"]) == EXIT_FAIL
    rep = json.loads((tmp_path / "custom-linear_decomposition_report.json").read_text())
    assert rep["condition_2_increasing"]["violations"] > 0


def test_reach_with_broken_decomposition_is_numeric_failure(tmp_path, capsys):
    cfg = _custom(tmp_path, block={"decomposition": "swapped"})
    assert main(["reach", str(cfg), "--output-dir", str(tmp_path)]) == EXIT_NUMERIC
    assert "step 1" in capsys.readouterr().err


def test_check_decomposition_custom_sign_split(tmp_path):
    cfg = _custom(tmp_path)
    assert main(["check-decomposition", str(cfg), "--output-dir", str(tmp_path)]) == EXIT_OK


def test_mc_validate_cwh(tmp_path):
    assert main(["mc-validate", "cwh", "--output-dir", str(tmp_path)]) == EXIT_OK
    rep = json.loads((tmp_path / "cwh_mc_report.json").read_text())
    fr = [s["empirical_fraction"] for s in rep["per_step"]]
    assert fr[5] > 0.5 and rep["satisfied"] and rep["M"] == 10_000


def test_mc_validate_degenerate(tmp_path):
    pt = [{"kind": "point", "value": 0.5}, {"kind": "point", "value": -0.25}]
    cfg = _custom(tmp_path, block={"x0": pt, "w": [{"kind": "point", "value": 0.1}]})
    assert main(["mc-validate", str(cfg), "--output-dir", str(tmp_path)]) == EXIT_OK
    rep = json.loads((tmp_path / "custom-linear_mc_report.json").read_text())
    assert all(s["empirical_fraction"] == 1.0 for s in rep["per_step"])


def test_mc_validate_tampered_tube(tmp_path):
    cfg = _custom(tmp_path)
    assert main(["reach", str(cfg), "--output-dir", str(tmp_path)]) == EXIT_OK
    tube_path = tmp_path / "lin_tube.csv"
    rows = _read_csv(tube_path)
    head = rows[0]
    lo_idx = [i for i, h in enumerate(head) if h.startswith("lower_")]
    hi_idx = [i for i, h in enumerate(head) if h.startswith("upper_")]
    for r in rows[1:]:
        for i, j in zip(lo_idx, hi_idx):
            r[j] = r[i]  # zero-width box at the lower corner
    with open(tube_path, "w", newline="") as fh:
        csv.writer(fh, lineterminator="\n").writerows(rows)
    assert main(["mc-validate", str(cfg), "--output-dir", str(tmp_path), "--tube", str(tube_path)]) == EXIT_FAIL
    rep = json.loads((tmp_path / "custom-linear_mc_report.json").read_text())
    # the last step has bound 0 and cannot fail
    assert rep["failing_steps"] == [0, 1, 2, 3]


def test_mc_validate_tube_length_mismatch(tmp_path, cwh_run):
    cfg = _custom(tmp_path)
    assert main(["mc-validate", str(cfg), "--tube", str(cwh_run / "cwh_tube.csv")]) == EXIT_CONFIG


def test_missing_delta0(tmp_path, capsys):
    cfg = _custom(tmp_path, delta0=None)
    assert main(["reach", str(cfg), "--output-dir", str(tmp_path)]) == EXIT_CONFIG
    assert "delta0" in capsys.readouterr().err


@pytest.mark.parametrize(
    "over, fragment",
    [
        ({"bogus": 1}, "bogus"),
        ({"schema_version": 2}, "schema_version"),
        ({"delta_w": 1.5}, "delta_w"),
        ({"horizon": 0}, "horizon"),
        ({"cwh": {}}, "cwh"),
        ({"block": {"A": [[1.0, 0.0]]}}, "A"),
        ({"block": {"x0": [{"kind": "gaussian", "mean": 0.0, "std": 1.0}]}}, "x0"),
        ({"monte_carlo": {"M": 0}}, "monte_carlo"),
    ],
)
def test_config_errors(tmp_path, capsys, over, fragment):
    cfg = _custom(tmp_path, **over)
    assert main(["reach", str(cfg), "--output-dir", str(tmp_path)]) == EXIT_CONFIG
    assert fragment in capsys.readouterr().err


def test_missing_file_and_bad_json(tmp_path):
    assert main(["reach", str(tmp_path / "nope.json")]) == EXIT_CONFIG
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["reach", str(bad)]) == EXIT_CONFIG


def test_mc_validate_needs_block(tmp_path):
    cfg = _custom(tmp_path, monte_carlo=None)
    assert main(["mc-validate", str(cfg)]) == EXIT_CONFIG


def test_custom_system_without_block_rejected():
    with pytest.raises(ConfigError, match="custom-linear"):
        scenario_from_dict({"schema_version": 1, "system": "custom-linear", "delta0": 0.1, "delta_w": 0.1,
                            "horizon": 1, "seed": 0, "outputs": {"tube_path": "a", "summary_path": "b"}})


def test_shipped_configs_are_valid():
    for name in ("cwh", "attitude7d"):
        p = shipped_config_path(name)
        assert p is not None and p.is_file()
        sc = load_scenario(p)
        assert sc.kind == name and sc.horizon == 5
    assert SCHEMA["$schema"].endswith("2020-12/schema")
    assert shipped_config_path("nothing") is None


def test_attitude_reach_csv_layout(tmp_path):
    assert main(["reach", "attitude7d", "--output-dir", str(tmp_path)]) == EXIT_OK
    rows = _read_csv(tmp_path / "attitude7d_tube.csv")
    assert rows[0][-2:] == ["theta_lo", "theta_hi"]
    assert all(len(r) == 4 + 3 * 7 + 2 for r in rows)
    summary = json.loads((tmp_path / "attitude7d_summary.json").read_text())
    assert np.allclose(summary["deltas"], [0.1, 0.28, 0.604, 1.0, 1.0, 1.0], atol=1e-12)
    th = summary["theta_ranges"]
    assert len(th) == 6 and all(0 <= a <= b <= math.pi for a, b in th)
    assert summary["monte_carlo"]["satisfied"] is True


def test_attitude_check_decomposition(tmp_path):
    assert main(["check-decomposition", "attitude7d", "--output-dir", str(tmp_path)]) == EXIT_OK
    rep = json.loads((tmp_path / "attitude7d_decomposition_report.json").read_text())
    assert rep["passed"]


def test_module_entry_point(tmp_path):
    import subprocess
    import sys
    r = subprocess.run([sys.executable, "-m", "stochreach", "--help"], capture_output=True, text=True)
    assert r.returncode == 0 and "check-decomposition" in r.stdout
    r = subprocess.run([sys.executable, "-m", "stochreach", "reach"], capture_output=True, text=True)
    assert r.returncode == 2
