import shutil
from collections import defaultdict
from importlib import resources
from pathlib import Path

import pytest

from refcast.cli import main

FIXTURE = Path(str(resources.files("refcast") / "data" / "hydro_fixture.csv"))
GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture
def fixture_path():
    return FIXTURE


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    """Temp cwd holding a copy of the bundled fixture as ``hydro.csv``."""
    shutil.copy(FIXTURE, tmp_path / "hydro.csv")
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("REFCAST_CONFIG", raising=False)
    return tmp_path


@pytest.fixture
def run(capsys):
    def _run(*argv):
        code = main([str(a) for a in argv])
        out, err = capsys.readouterr()
        return code, out, err

    return _run


_criteria: dict[int, list[str]] = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(n): acceptance criterion number n")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("acceptance")
        if mark:
            item.user_properties.append(("criterion", mark.args[0]))


def pytest_runtest_logreport(report):
    crit = dict(report.user_properties).get("criterion")
    if crit is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _criteria[crit].append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(_criteria):
        ok = all(o == "passed" for o in _criteria[crit])
        terminalreporter.write_line(f"criterion {crit}: {'PASS' if ok else 'FAIL'}")
