import numpy as np
import pytest

_ACCEPTANCE = []


@pytest.fixture
def acceptance():
    """Record one acceptance criterion outcome; printed in the terminal summary."""

    def record(ident, passed, detail):
        _ACCEPTANCE.append((ident, bool(passed), detail))
        return passed

    return record


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for ident, passed, detail in sorted(_ACCEPTANCE, key=lambda x: int(x[0].split()[0][2:])):
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {ident}: {detail}")
