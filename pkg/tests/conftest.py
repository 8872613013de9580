import numpy as np
import pytest

from diracjc import CouplingParams


@pytest.fixture
def unit_coupling():
    """theta = 1, g0 = 2: the reference constant-modulation case."""
    return CouplingParams(g0=2.0, theta=1.0, xi0=1.0)


def coupling(g0, theta=1.0):
    return CouplingParams(g0=g0, theta=theta, xi0=g0**2 / 4.0 if theta else 0.0)


def rel_err(x, ref):
    x, ref = np.asarray(x), np.asarray(ref)
    return np.abs(x - ref) / np.maximum(np.abs(ref), 1e-300)


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(module.RESULTS):
        terminalreporter.write_line(module.RESULTS[key])
