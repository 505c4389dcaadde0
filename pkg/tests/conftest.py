import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from sgshift import _kernels  # noqa: E402

# criterion lines recorded by test_acceptance, printed after the run
ACCEPTANCE_LINES = []


@pytest.fixture(scope="session", autouse=True)
def _compiled_kernels():
    """JIT compilation happens once here so no test pays for it."""
    _kernels.warmup()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
        terminalreporter.write_line(line)
    passed = sum(line.startswith("PASS") for line in ACCEPTANCE_LINES)
    terminalreporter.write_line(f"{passed}/{len(ACCEPTANCE_LINES)} criteria passed")
