import re

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")


def pytest_terminal_summary(terminalreporter):
    rows = {}
    for key in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(key, []):
            m = _CRITERION.search(getattr(rep, "nodeid", ""))
            if not m or rep.when not in ("call", "setup"):
                continue
            n = int(m.group(1))
            if key == "passed" and rep.when == "setup":
                continue
            rows[n] = ("PASS" if key == "passed" else "FAIL", m.group(2).replace("_", " "), rep.duration)
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(rows):
        status, title, secs = rows[n]
        terminalreporter.write_line(f"criterion {n}: {status}  {title}  ({secs:.1f}s)")
