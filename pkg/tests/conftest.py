import pytest

_ACCEPTANCE_LINES = []


def _record(num, name, ok, detail):
    line = f"criterion {num} ({name}): {'PASS' if ok else 'FAIL'} - {detail}"
    _ACCEPTANCE_LINES.append((num, line))
    return line


@pytest.fixture
def criterion():
    """Recorder for acceptance results, echoed in the terminal summary."""
    return _record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for _, line in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
