import numpy as np
import pytest

from localkl import GaussianParams, Grid


def random_pd(rng, p, cond=50.0):
    """Random SPD matrix with eigenvalues spread over ``[1, cond]``."""
    q, _ = np.linalg.qr(rng.standard_normal((p, p)))
    ev = np.exp(rng.uniform(0.0, np.log(cond), size=p))
    return (q * ev) @ q.T


def random_params(rng, p, grid=None, scale=1.0):
    grid = Grid.indices(p) if grid is None else grid
    return GaussianParams(grid, scale * rng.standard_normal(p), random_pd(rng, p))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        status, detail = RESULTS[number]
        terminalreporter.write_line(f"criterion {number:2d}: {status}  {detail}")
