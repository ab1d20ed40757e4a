import numpy as np
import pytest

from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def six_point_sample():
    return np.array([1.0, -1.0, 2.0, -2.0, 3.0, -3.0]).reshape(-1, 1)


ACCEPTANCE_LINES = []


@pytest.fixture
def report_line():
    """Record one acceptance verdict for the end-of-run summary."""
    def record(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
