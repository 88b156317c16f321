from collections import OrderedDict
from pathlib import Path

import numpy as np
import pytest

from sdcong.io import load_matrix

DATA = Path(__file__).resolve().parents[1] / "data"
FIXTURES = Path(__file__).resolve().parent / "fixtures"

_criteria: "OrderedDict[str, list]" = OrderedDict()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name, text): acceptance criterion covered by this test")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    crit = getattr(report, "_criterion", None)
    if crit is None:
        return
    _criteria.setdefault(crit[0], [crit[1], []])[1].append((report.nodeid, report.outcome))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is not None:
        rep._criterion = (m.args[0], m.args[1] if len(m.args) > 1 else "")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name, (text, results) in sorted(_criteria.items(), key=lambda kv: int(kv[0].lstrip("AC"))):
        ok = all(o == "passed" for _, o in results)
        failed = [nid.split("::")[-1] for nid, o in results if o != "passed"]
        line = f"{name} {'PASS' if ok else 'FAIL'}  {text}"
        if failed:
            line += f"  (failed: {', '.join(failed)})"
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def golden6():
    return load_matrix(DATA / "golden6_A.json"), load_matrix(DATA / "golden6_B.json")


@pytest.fixture(scope="session")
def triple():
    return [load_matrix(DATA / f"triple_{c}.json") for c in "ABC"]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
