import numpy as np
import pytest

from explainerbench import datasets
from explainerbench.explainers import WeightedRows
from explainerbench.functional_tests import TESTS, DataPaths


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def cough_ctx():
    return TESTS["cough_and_fever"].setup(np.random.default_rng(1234), DataPaths())


@pytest.fixture(scope="session")
def cough_10_90_ctx():
    return TESTS["cough_and_fever_10_90"].setup(np.random.default_rng(1234), DataPaths())


@pytest.fixture(scope="session")
def uniform_bg_2():
    """Exact uniform background over the 2-feature boolean domain."""
    rows = np.array([[0, 0], [0, 1], [1, 0], [1, 1]], dtype=float)
    return WeightedRows.uniform(rows)


def exact_boolean_background(d: int) -> WeightedRows:
    bits = np.arange(2**d)[:, None] >> np.arange(d)[None, ::-1]
    return WeightedRows.uniform((bits & 1).astype(float))
