"""Session wiring for the acceptance battery.

Acceptance tests register one verdict per criterion through the
``record_criterion`` fixture; the hook below reprints every verdict in the
terminal summary so a plain ``pytest`` run always ends with one PASS/FAIL
line per criterion, whatever the capture settings.
"""

import pytest

_VERDICTS: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def record_criterion():
    def record(name: str, passed: bool, detail: str) -> None:
        _VERDICTS[name] = (passed, detail)
        print(f"{name}: {'PASS' if passed else 'FAIL'} ({detail})")
    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_VERDICTS):
        passed, detail = _VERDICTS[name]
        terminalreporter.write_line(
            f"{name}: {'PASS' if passed else 'FAIL'} ({detail})")
