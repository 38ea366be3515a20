import pytest

from fqgraphs.finite_field import make_field
from fqgraphs.spectrum import ColoredCayleyGraph

# criterion number -> list of outcomes, filled by the acceptance module
_CRITERIA: dict[int, list[str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    num = _criterion_of(report)
    if num is not None:
        _CRITERIA.setdefault(num, []).append(report.outcome)


def _criterion_of(report):
    for kw in report.keywords:
        if kw.startswith("criterion_"):
            return int(kw.split("_", 1)[1])
    return None


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            item.keywords[f"criterion_{m.args[0]}"] = True


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        outcomes = _CRITERIA[num]
        failed = sum(o == "failed" for o in outcomes)
        verdict = "PASS" if failed == 0 else "FAIL"
        terminalreporter.write_line(
            f"criterion {num:2d}: {verdict}  ({len(outcomes) - failed}/{len(outcomes)} cases passed)")


@pytest.fixture(scope="session")
def f3():
    return make_field(3)


@pytest.fixture(scope="session")
def f9():
    return make_field(3, 2, [1, 0, 1])


@pytest.fixture(scope="session")
def g3():
    return ColoredCayleyGraph.build(make_field(3), 2)


@pytest.fixture(scope="session")
def g5():
    return ColoredCayleyGraph.build(make_field(5), 2)
