import numpy as np
import pytest

from Modules.grs_code import make_code
from Modules.tower_field import TwoErasure, Universal, build_tower


def pytest_addoption(parser):
    parser.addoption("--run-bench", action="store_true", default=False, help="run the large plan-level bench")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-bench"):
        return
    skip_bench = pytest.mark.skip(reason="needs --run-bench")
    for item in items:
        if "bench" in item.keywords:
            item.add_marker(skip_bench)


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(2017))


# l = 210: D = 2, primes 3, 5, 7
@pytest.fixture(scope="session")
def small_tower():
    return build_tower(2, Universal(2), 3, 1)


@pytest.fixture(scope="session")
def small_code(small_tower):
    return make_code(small_tower)


# l = 2310: D = 2, primes 3, 5, 7, 11
@pytest.fixture(scope="session")
def n4k2_tower():
    return build_tower(2, Universal(2), 4, 2)


@pytest.fixture(scope="session")
def n4k2_code(n4k2_tower):
    return make_code(n4k2_tower)


# two-erasure code with s_1 = 1, s_2 = 2 (l = 2310)
@pytest.fixture(scope="session")
def two_erasure_small():
    return build_tower(2, TwoErasure(2), 4, 2)


# D = 6, primes 7, 13, 19, 31; plan-level only (l = 321594)
@pytest.fixture(scope="session")
def two_erasure_tower():
    return build_tower(2, TwoErasure(2), 4, 1)


@pytest.fixture(scope="session")
def r3_tower():
    return build_tower(2, Universal(3), 4, 1)


# p = 5, D = 1, primes 2, 3, 5 (l = 30)
@pytest.fixture(scope="session")
def p5_tower():
    return build_tower(5, Universal(1), 3, 1)


@pytest.fixture(scope="session")
def two_erasure_code(two_erasure_small):
    return make_code(two_erasure_small)


# D = 6, primes 7, 13, 19, 31, 37; plan-level only
@pytest.fixture(scope="session")
def r3_n5k2_tower():
    return build_tower(2, Universal(3), 5, 2)
