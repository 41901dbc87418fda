import pytest

from congestion_qaoa import bundled_game, enumerate_paths

from corpus import corpus


@pytest.fixture(scope="session")
def game():
    return bundled_game()


@pytest.fixture(scope="session")
def table(game):
    return enumerate_paths(game)


@pytest.fixture(scope="session")
def games():
    return corpus()


_criteria = []


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _criteria.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _criteria:
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict}  {name}")
