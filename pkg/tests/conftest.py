"""Makes the acceptance gate's per-criterion verdict lines visible.

pytest captures stdout of passing tests; the gate also records each
``CRITERION n: PASS/FAIL`` line here so the terminal summary shows all
ten regardless of capture settings.
"""

CRITERION_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not CRITERION_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in CRITERION_LINES:
        terminalreporter.write_line(line)
