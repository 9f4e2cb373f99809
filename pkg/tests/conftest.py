import numpy as np
import pytest

from symframes.linalg import Tolerance

_RESULTS: dict[str, str] = {}


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def tol():
    return Tolerance()


@pytest.fixture
def criterion(request):
    """Record a PASS/FAIL line for an acceptance criterion, keyed by its label."""
    label = request.node.get_closest_marker("criterion").args[0]
    _RESULTS.setdefault(label, "FAIL")
    yield
    rep = getattr(request.node, "rep_call", None)
    if rep is not None and rep.passed and _RESULTS[label] != "FAILED":
        _RESULTS[label] = "PASS"
    elif rep is not None and not rep.passed:
        _RESULTS[label] = "FAILED"


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion this test belongs to")


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_RESULTS, key=lambda s: int(s.split()[0])):
        status = "PASS" if _RESULTS[label] == "PASS" else "FAIL"
        terminalreporter.write_line(f"{status}  {label}")
