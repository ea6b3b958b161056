from __future__ import annotations

import pytest

# filled by test_acceptance.py: criterion number -> (passed, message)
ACCEPTANCE_RESULTS: dict = {}


@pytest.fixture
def record_criterion():
    def _record(number: int, passed: bool, message: str) -> None:
        ACCEPTANCE_RESULTS[number] = (bool(passed), message)
        print(f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {message}")

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        passed, message = ACCEPTANCE_RESULTS[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {message}")
