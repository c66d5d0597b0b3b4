import numpy as np
import pytest
from hypothesis import strategies as st

from fields.grid import GridSpec
from littlewood_paley.filter_bank import build_filter_bank

seeds = st.integers(min_value=0, max_value=2**32 - 1)


@pytest.fixture(scope="session")
def grid32():
    return GridSpec(n=32)


@pytest.fixture(scope="session")
def grid64():
    return GridSpec(n=64)


@pytest.fixture(scope="session")
def bank64(grid64):
    return build_filter_bank(grid64)


@pytest.fixture(scope="session")
def bank32(grid32):
    return build_filter_bank(grid32)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
