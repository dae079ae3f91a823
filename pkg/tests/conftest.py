"""Shared pytest hooks.

After the normal report, print one PASS/FAIL line per acceptance criterion
so the gate can be read off without scrolling through the full output.
"""


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = {}
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance" not in nodeid or "::test_criterion_" not in nodeid:
                continue
            if status == "passed" and getattr(report, "when", "call") != "call":
                continue
            name = nodeid.split("::test_criterion_")[-1]
            if status == "passed":
                results.setdefault(name, "PASS")
            else:
                results[name] = "FAIL"
    if not results:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for name in sorted(results, key=lambda s: int(s.split("_")[0])):
        number, _, rest = name.partition("_")
        label = rest.replace("_", " ")
        terminalreporter.write_line(f"criterion {number} ({label}): {results[name]}")
