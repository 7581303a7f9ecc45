import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_CRITERIA = pytest.StashKey[dict]()


@pytest.fixture
def criterion(request):
    """Record one acceptance line; the lines are printed together at the end of the run."""
    log = request.config.stash.setdefault(_CRITERIA, {})

    def record(number: int, title: str, passed: bool, detail: str = "") -> bool:
        log[number] = f"{'PASS' if passed else 'FAIL'}  criterion {number:>2}  {title}" + (f"  ({detail})" if detail else "")
        return passed

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    log = config.stash.get(_CRITERIA, {})
    if log:
        terminalreporter.section("acceptance criteria")
        for number in sorted(log):
            terminalreporter.write_line(log[number])
