import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_START = time.perf_counter()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for k in sorted(results):
        ok, detail = results[k]
        tr.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {k}: {detail}")
    elapsed = time.perf_counter() - _START
    tr.write_line(f"[{'PASS' if elapsed <= 60 else 'FAIL'}] full suite wall time {elapsed:.1f}s (<=60s)")
