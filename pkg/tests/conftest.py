import numpy as np
import pytest

ACCEPTANCE_KEY = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[ACCEPTANCE_KEY] = {}


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def record(request):
    """record(n, passed, detail): print and keep one line per acceptance criterion."""
    lines = request.config.stash[ACCEPTANCE_KEY]

    def _record(n: int, passed: bool, detail: str):
        line = f"criterion {n:2d}: {'PASS' if passed else 'FAIL'}  {detail}"
        lines[n] = line
        print(line)

    return _record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_KEY, {})
    if not lines:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for n in sorted(lines):
        terminalreporter.write_line(lines[n])
