import pytest

_results: dict[int, tuple[str, list[str]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, label): acceptance criterion number and short label")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (rep.when != "call" and rep.passed):
        return
    n, label = mark.args
    _, states = _results.setdefault(n, (label, []))
    states.append("passed" if rep.passed else "failed")


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_results):
        label, states = _results[n]
        verdict = "PASS" if states and all(s == "passed" for s in states) else "FAIL"
        terminalreporter.write_line(f"{verdict}  criterion {n:>2}: {label}")
