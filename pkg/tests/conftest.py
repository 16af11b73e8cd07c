import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from stochreach.intervals import hull  # noqa: E402
from stochreach.reach import run_reachability  # noqa: E402
from stochreach.systems import AttitudeConfig, CwhConfig, build_attitude_system, build_cwh_system  # noqa: E402


@pytest.fixture(scope="session")
def cwh_cfg():
    return CwhConfig()


@pytest.fixture(scope="session")
def cwh_system(cwh_cfg):
    return build_cwh_system(cwh_cfg)


@pytest.fixture(scope="session")
def cwh_tube(cwh_system, cwh_cfg):
    return run_reachability(
        cwh_system, cwh_cfg.x0_distribution(), cwh_cfg.w_distribution(), 0.05, 0.05, 5, 20231, Ts=cwh_cfg.Ts
    )


@pytest.fixture(scope="session")
def att_cfg():
    return AttitudeConfig()


@pytest.fixture(scope="session")
def att_system(att_cfg):
    return build_attitude_system(att_cfg)


@pytest.fixture(scope="session")
def att_tube(att_system, att_cfg):
    return run_reachability(
        att_system, att_cfg.x0_distribution(), att_cfg.w_distribution(), 0.1, 0.1, 5, 20232, Ts=att_cfg.Ts
    )


@pytest.fixture(scope="session")
def att_runtime_system(att_system, att_tube):
    """Attitude system whose validation domain is the hull of the tube's boxes."""
    return att_system.with_domains(hull(*(s.box for s in att_tube.steps)), att_tube.disturbance_box)
