import json
import time

import pytest

from liouville_bcft.cli import main


@pytest.fixture(scope="session")
def default_verify_run(tmp_path_factory):
    """One in-process run of ``verify`` with default arguments.

    Returns ``(exit_code, reports, elapsed_seconds, report_text)``.
    """
    path = tmp_path_factory.mktemp("verify") / "report.json"
    start = time.perf_counter()
    code = main(["verify", "--report", str(path)])
    elapsed = time.perf_counter() - start
    text = path.read_text(encoding="utf-8")
    return code, json.loads(text), elapsed, text


ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_line():
    """Record a one-line verdict for the acceptance summary."""
    def record(number, ok, elapsed, detail):
        line = (f"{'PASS' if ok else 'FAIL'} criterion {number:>2}: {detail}"
                f" ({elapsed:.1f} s)")
        ACCEPTANCE_LINES.append(line)
        print(line)
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES,
                           key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
