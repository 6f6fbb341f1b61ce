import pytest

from ecta.enumeration import AUDIT


@pytest.fixture(autouse=True, scope="session")
def measure_audit():
    """Every enumeration in the suite runs with the termination-measure audit on."""
    AUDIT.enabled = True
    AUDIT.strict = False
    AUDIT.reset()
    yield AUDIT
    assert AUDIT.violations == 0, AUDIT.last_violation
    assert AUDIT.mismatches == 0


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
