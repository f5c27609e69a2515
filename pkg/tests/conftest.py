import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

CRITERIA = {
    1: "normal-form soundness against the rewriting oracle",
    2: "induced maps respect the path-group relations",
    3: "composition and inverse formulas agree pointwise",
    4: "Dehn twist suite (twistors, subdivision square, efficiency mutants)",
    5: "H-length equals the brute-force minimum",
    6: "H-zero transfers across commuting squares",
    7: "quotient / blow-up roundtrip on FIX-C and variants",
    8: "partial Dehn twist blow-up on FIX-D",
    9: "CLI golden files and exit codes",
}

_results: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n = mark.args[0]
    if rep.when == "call" or rep.failed:
        prev = _results.get(n, True)
        _results[n] = prev and rep.passed


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        if n in _results:
            status = "PASS" if _results[n] else "FAIL"
            terminalreporter.write_line(f"criterion {n}: {status}  {CRITERIA[n]}")
