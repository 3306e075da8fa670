import re


def pytest_terminal_summary(terminalreporter):
    """One pass/fail line per acceptance criterion."""
    status: dict[int, str] = {}
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            m = re.search(r"test_criterion_(\d+)", getattr(report, "nodeid", ""))
            if m and getattr(report, "when", "call") == "call":
                n = int(m.group(1))
                word = "PASS" if outcome == "passed" else "FAIL"
                status[n] = word
    if status:
        terminalreporter.write_line("")
        for n in sorted(status):
            terminalreporter.write_line(f"ACCEPTANCE CRITERION {n}: {status[n]}")
