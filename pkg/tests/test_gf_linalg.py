import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from Modules.errors import ConstructionError
from Modules.gf_linalg import IncrementalBasis, inverse_mod_p, solve_mod_p


def _random_invertible(n, p, seed):
    rng = np.random.Generator(np.random.PCG64(seed))
    # unit lower times unit upper triangular is always invertible
    lower = np.tril(rng.integers(0, p, (n, n)), -1) + np.eye(n, dtype=np.int64)
    upper = np.triu(rng.integers(0, p, (n, n)), 1) + np.eye(n, dtype=np.int64)
    return (lower @ upper) % p


@settings(max_examples=30, deadline=None)
@given(p=st.sampled_from([2, 3, 7]), n=st.integers(1, 12), seed=st.integers(0, 10_000))
def test_solve_recovers_solution(p, n, seed):
    a = _random_invertible(n, p, seed)
    x = np.random.Generator(np.random.PCG64(seed + 1)).integers(0, p, (n, 2))
    b = (a @ x) % p
    assert np.array_equal(solve_mod_p(a, b, p), x)


@pytest.mark.parametrize("p", [2, 5])
def test_inverse(p):
    a = _random_invertible(6, p, 3)
    assert np.array_equal((a @ inverse_mod_p(a, p)) % p, np.eye(6, dtype=np.int64))


def test_tall_consistent_system():
    a = np.array([[1, 0], [0, 1], [1, 1]])
    b = np.array([1, 1, 0])
    assert solve_mod_p(a, b, 2).tolist() == [1, 1]


@pytest.mark.parametrize("p", [2, 3])
def test_singular_system_raises(p):
    a = np.array([[1, 1], [1, 1]])
    with pytest.raises(ConstructionError):
        solve_mod_p(a, np.array([1, 0]), p)


def test_row_mismatch():
    with pytest.raises(ValueError):
        solve_mod_p(np.eye(2, dtype=np.int64), np.zeros(3, dtype=np.int64), 2)


@pytest.mark.parametrize("p", [2, 3])
def test_incremental_basis(p):
    basis = IncrementalBasis(p)
    assert basis.insert({0: 1, 2: 1})
    assert basis.insert({2: 1})
    assert not basis.insert({0: 1})
    assert not basis.insert({})
    assert basis.insert({5: 1})
    assert basis.rank == 3


def test_inverse_of_singular_matrix_raises():
    with pytest.raises(ConstructionError):
        inverse_mod_p(np.array([[1, 2], [2, 4]]), 3)


def test_tall_rank_deficient_system_raises():
    a = np.array([[1, 1], [1, 1], [0, 0]])
    with pytest.raises(ConstructionError):
        solve_mod_p(a, np.array([1, 1, 0]), 5)


def test_tall_inconsistent_system_raises():
    a = np.array([[1, 0], [0, 1], [1, 1]])
    with pytest.raises(ConstructionError):
        solve_mod_p(a, np.array([1, 1, 1]), 2)
