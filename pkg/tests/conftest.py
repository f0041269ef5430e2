import pytest

from helpers import make_problem

# (number, description) -> "PASS" / "FAIL", filled by tests marked ``acceptance``
_ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): a numbered acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return
    key = mark.args
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        _ACCEPTANCE[key] = "PASS" if rep.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for (number, title), status in sorted(_ACCEPTANCE.items()):
        terminalreporter.write_line(f"[{status}] criterion {number}: {title}")


@pytest.fixture
def six_node():
    """Zero-moment k = 3 problem that holds although the window test fails."""
    return make_problem((6, 5, 4, 2, 1, 0), (1, -3, 3, -3, 3, -1), 3)


@pytest.fixture
def karamata():
    """``f(4) + f(0) >= 2 f(2)`` for convex ``f``."""
    return make_problem((4, 2, 0), (1, -2, 1), 2)
