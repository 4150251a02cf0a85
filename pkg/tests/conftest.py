import math

import numpy as np
import pytest


def naive_mixed_norm(arr, q, sigma=None):
    """Nested norm by explicit recursion over the axes in nesting order.

    Written without the library's vectorized path so it can serve as an
    oracle for it.
    """
    arr = np.asarray(arr, dtype=float)
    m = arr.ndim
    sigma = list(range(m)) if sigma is None else list(sigma)
    qs = [float(v) for v in q]

    def level(k, fixed):
        if k == m:
            return float(arr[tuple(fixed[axis] for axis in range(m))])
        axis = sigma[k]
        vals = [level(k + 1, {**fixed, axis: j}) for j in range(arr.shape[axis])]
        if math.isinf(qs[k]):
            return max(vals)
        return sum(v ** qs[k] for v in vals) ** (1.0 / qs[k])

    return level(0, {})


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
