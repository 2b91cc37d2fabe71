import functools
import itertools
from pathlib import Path

import numpy as np
import pytest

from hfhe.data_io import save_prices
from hfhe.synthetic import synthetic_prices


@functools.lru_cache(maxsize=None)
def simplex_grid(n: int, steps: int = 100) -> np.ndarray:
    """Every point of the simplex whose coordinates are multiples of 1/steps."""
    if n == 1:
        return np.ones((1, 1))
    pts = []
    for cuts in itertools.combinations(range(steps + n - 1), n - 1):
        parts = np.diff((-1,) + cuts + (steps + n - 1,)) - 1
        pts.append(parts)
    return np.array(pts, dtype=float) / steps


def random_small_instance(rng, n_max=4, T_max=8, positive=False):
    n = int(rng.integers(1, n_max + 1))
    T = int(rng.integers(2, T_max + 1))
    if positive:
        r = rng.uniform(0.001, 0.2, size=(T, n))
    else:
        r = rng.normal(0.01, 0.1, size=(T, n)).round(3)
    return r


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def toy_prices(tmp_path) -> Path:
    """Six synthetic assets, 700 days, written as a CSV file."""
    path = tmp_path / "prices.csv"
    save_prices(synthetic_prices(6, 700, seed=3), path)
    return path


def write_csv(path: Path, text: str) -> Path:
    path.write_text(text)
    return path


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
