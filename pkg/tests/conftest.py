from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_ACCEPTANCE: list[tuple[str, str]] = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        status = "PASS" if report.passed else "FAIL"
        _ACCEPTANCE.append((status, marker.args[0]))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion with a summary line")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for status, label in _ACCEPTANCE:
        terminalreporter.write_line(f"{status}  {label}")


@pytest.fixture(scope="session")
def oracle_1e6() -> bytearray:
    """oracle_1e6[n] == 1 iff tau(n) | sigma(n), by summing every divisor (pure Python)."""
    from oracles import sigma_tau_table

    sig, cnt = sigma_tau_table(10 ** 6)
    return bytearray(1 if n and sig[n] % cnt[n] == 0 else 0 for n in range(10 ** 6 + 1))


@pytest.fixture(scope="session")
def factorizations_1e6():
    from arithnum.factorization import iter_factorizations

    return list(iter_factorizations(10 ** 6))
