import pytest

from Modules.errors import ParameterError
from Modules.monomial_space import project, rank, span_sum_dim
from Modules.repair_sets import (
    build_BG,
    build_S,
    build_T,
    build_W,
    constants,
    expected_S_size,
    g_support_ok,
    is_supported,
    reconstruction_set,
    verify_exact_cover,
)
from Modules.tower_field import SparseElement, TwoErasure, Universal


def test_constants_universal_r3():
    c = constants(Universal(3), 2, 2, 1)
    assert c.D == 6
    assert c.s == (2, 3, 1)
    assert c.t == (1, 2, 6)
    assert c.s_at(2) == 3 and c.t_at(3) == 6


def test_constants_two_erasure_h1():
    c = constants(TwoErasure(2), 1, 2, 1)
    assert c.s == (2, 3)
    assert c.t == (1, 2)


@pytest.mark.parametrize(
    "mode,h,d,k",
    [
        (Universal(2), 3, 1, 1),  # h > r
        (Universal(2), 1, 0, 1),  # d < k
        (Universal(2), 1, 3, 1),  # t_2 = 3 does not divide 2
        (Universal(3), 0, 2, 1),
    ],
)
def test_constants_reject(mode, h, d, k):
    with pytest.raises(ParameterError):
        constants(mode, h, d, k)


def test_constants_reject_too_many_helpers():
    assert constants(Universal(2), 1, 2, 1).s == (2, 1)
    with pytest.raises(ParameterError, match="d <= n - h"):
        constants(Universal(2), 1, 2, 1, n=2)
    with pytest.raises(ParameterError):
        constants(Universal(3), 2, 2, 1, n=3)


def test_exact_cover():
    for c in (constants(Universal(3), 2, 2, 1), constants(Universal(3), 3, 2, 2), constants(TwoErasure(2), 2, 2, 1)):
        verify_exact_cover(c)


@pytest.mark.parametrize(
    "mode,h,d,k,n,expected",
    [
        (Universal(2), 1, 2, 1, 3, True),
        (Universal(2), 2, 1, 1, 3, True),
        (Universal(2), 2, 2, 1, 3, False),  # d > n - h
        (Universal(2), 3, 1, 1, 5, False),  # h > r
        (Universal(2), 1, 3, 1, 5, False),  # 3 does not divide 2
        (TwoErasure(2), 2, 2, 1, 4, True),
        (TwoErasure(2), 1, 2, 1, 4, True),
        (TwoErasure(2), 1, 3, 1, 4, True),
        (TwoErasure(2), 2, 1, 1, 4, True),  # s = (1, 2) and 2 divides 6
        (TwoErasure(2), 2, 3, 1, 4, False),  # d > n - h
    ],
)
def test_is_supported(mode, h, d, k, n, expected):
    assert is_supported(mode, h, d, k, n) == expected


def test_W_shape(small_tower):
    c = constants(Universal(2), 1, 2, 1)
    W = build_W(1, (1,), c, small_tower)
    assert len(W) == 3  # p_1 = 3
    assert W[0] == SparseElement.monomial((0, 0, 0, 0))
    assert W[1] == SparseElement.monomial((1, 1, 0, 0))
    assert W[2] == SparseElement.from_dict({(0, 2, 0, 0): 1, (1, 2, 0, 0): 1}, 2)


def test_W_size_two_erasure(two_erasure_tower):
    c = constants(TwoErasure(2), 2, 2, 1)
    assert len(build_W(1, (1, 2), c, two_erasure_tower)) == 7
    assert len(build_W(2, (1, 2), c, two_erasure_tower)) == 13


def test_S_and_T_sizes(r3_tower):
    spec = r3_tower
    failed = (1, 2)
    c = constants(spec.mode, 2, 2, spec.k)
    for i in (1, 2):
        S = build_S(i, failed, c, spec)
        assert len(S) == expected_S_size(i, failed, c, spec)
        T = build_T(i, failed, c, spec)
        assert c.s_at(i) * len(T) == (42 if i == 1 else 546)
    assert expected_S_size(1, failed, c, spec) == 273
    assert expected_S_size(2, failed, c, spec) == 182


def test_reconstruction_set_spans(small_tower):
    spec = small_tower
    c = constants(spec.mode, 1, 2, spec.k)
    recon = reconstruction_set(1, (1,), c, spec)
    assert len(recon) == 6
    assert rank(project(recon, (1,), spec)) == 6


def test_nested_bases_r3(r3_tower):
    spec = r3_tower
    failed = (1, 2)
    c = constants(spec.mode, 2, 2, spec.k)
    S = [project(build_S(i, failed, c, spec), failed, spec) for i in (1, 2)]

    B1, G1 = build_BG(1, failed, c, spec)
    assert G1 == build_W(1, failed, c, spec)
    assert len(B1) == span_sum_dim(S[:1]) == 273

    B2, G2 = build_BG(2, failed, c, spec)
    assert len(G2) == 364
    assert len(B2) == 364
    assert rank(project(B2, failed, spec)) == 364
    assert g_support_ok(G2, 2, failed, c)


def test_build_BG_range(small_tower):
    c = constants(small_tower.mode, 1, 2, small_tower.k)
    with pytest.raises(ParameterError):
        build_BG(2, (1,), c, small_tower)
