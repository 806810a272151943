"""Shared pytest hooks.

The acceptance module keeps a scorecard of one line per criterion; reprint
it after the run so the full picture survives output capturing.
"""

import sys


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    module = sys.modules.get("test_acceptance")
    log = getattr(module, "ACCEPTANCE_LOG", None)
    if not log:
        return
    terminalreporter.write_sep("=", "ACCEPTANCE SUMMARY")
    for line in log:
        terminalreporter.write_line(line)
