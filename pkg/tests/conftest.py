import re

_ACCEPTANCE = re.compile(r"test_c(\d+)_(\w+)")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion at the end of the run."""
    rows = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            if "test_acceptance.py" not in rep.nodeid:
                continue
            m = _ACCEPTANCE.search(rep.nodeid)
            if m is None:
                continue
            status = "PASS" if outcome == "passed" else "FAIL"
            rows[int(m.group(1))] = (m.group(2).replace("_", " "), status)
    if not rows:
        return
    terminalreporter.section("acceptance")
    for num in sorted(rows):
        label, status = rows[num]
        terminalreporter.write_line(f"criterion {num:2d} {status}  ({label})")
