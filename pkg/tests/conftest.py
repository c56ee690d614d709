"""Shared test hooks: collect validation summary lines and echo them at the end."""

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.write_sep("-", "validation criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
