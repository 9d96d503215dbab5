"""Shared pytest configuration.

After the run, prints one line per acceptance criterion collected by
tests/test_acceptance.py, so the pass/fail ledger is visible even with
captured output.
"""
import sys


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None) if mod else None
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(results):
        status, detail = results[num]
        line = f"criterion {num:2d}: {status}"
        if detail:
            line += f" — {detail}"
        terminalreporter.write_line(line)
