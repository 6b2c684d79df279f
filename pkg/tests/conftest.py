import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fibsic.kernels import available_backends  # noqa: E402
from fibsic.search import SearchConfig, search  # noqa: E402


@pytest.fixture(scope="session")
def fiducials():
    """Converged Fibonacci-symmetric fiducials for d = 4 and 8, keyed by d."""
    out = {}
    for d, seed in ((4, 42), (8, 7)):
        result = search(SearchConfig(d=d, master_seed=seed, jobs=1))
        assert result.converged
        out[d] = result.fiducial
    return out


@pytest.fixture(params=available_backends())
def backend(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[number])
