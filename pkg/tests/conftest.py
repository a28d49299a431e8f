from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

_ACCEPTANCE_RESULTS: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance" in report.nodeid and report.when == "call":
        name = report.nodeid.split("::")[-1]
        _ACCEPTANCE_RESULTS[name] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name in sorted(_ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"{_ACCEPTANCE_RESULTS[name]}  {name}")

settings.register_profile(
    "ci",
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def bfn_mini(data_dir) -> Path:
    return data_dir / "bfn_mini.xml"


@pytest.fixture(scope="session")
def swefn_mini(data_dir) -> Path:
    return data_dir / "swefn_mini.xml"


@pytest.fixture(scope="session")
def frames_tsv(data_dir) -> Path:
    return data_dir / "frames_fixture.tsv"


@pytest.fixture(scope="session")
def frame_index(frames_tsv):
    from valgram.frames import load_frame_index

    return load_frame_index(frames_tsv)
