import sys
from collections import defaultdict
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

# criterion number -> (title, [(part, ok, detail), ...]); filled by test_acceptance
ACCEPTANCE = defaultdict(lambda: ["", []])


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, parts = ACCEPTANCE[n]
        status = "PASS" if all(ok for _, ok, _ in parts) else "FAIL"
        failed = [f"{p} ({d})" for p, ok, d in parts if not ok]
        tail = f" -- failing: {'; '.join(failed)}" if failed else ""
        terminalreporter.write_line(f"criterion {n:>2} {status}: {title}{tail}")
