import sys
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def fixture_complexes():
    from momentangle import fixtures

    return {name: fixtures.load(name) for name in fixtures.NAMES}


ACCEPTANCE_LINES = {}


@pytest.fixture
def criterion():
    """``criterion(n, checks)``: record one pass/fail line, then fail the test on any failed check.

    ``checks`` is a list of ``(label, ok)`` pairs.
    """

    def record(n, title, checks):
        failed = [label for label, ok in checks if not ok]
        status = "PASS" if not failed else "FAIL"
        detail = f"{len(checks) - len(failed)}/{len(checks)} checks passed"
        if failed:
            detail += "; failed: " + "; ".join(failed)
        ACCEPTANCE_LINES[n] = f"criterion {n:2d} {status}  {title} ({detail})"
        assert not failed, "; ".join(failed)

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
