import numpy as np
import pytest

from Modules.errors import ParameterError, SupportError
from Modules.monomial_space import (
    concat,
    contains,
    coordinate_columns,
    extract_basis,
    project,
    rank,
    set_product,
    span_intersection_dim,
    span_sum_dim,
)
from Modules.repair_sets import build_S, build_W, constants
from Modules.tower_field import SparseElement


def _m(*exps):
    return SparseElement.monomial(tuple(exps))


def test_project_orders_and_dedupes(small_tower):
    spec = small_tower
    els = [_m(1, 0, 0, 0), _m(0, 2, 0, 0), _m(1, 0, 0, 0)]
    mat = project(els, [1], spec)
    assert mat.dims == (2, 3)
    assert mat.n_cols == 2
    assert mat.columns == (((2, 1),), ((3, 1),))
    assert mat.to_dense().sum() == 2


def test_project_rejects_foreign_generators(small_tower):
    with pytest.raises(SupportError):
        project([_m(0, 0, 1, 0)], [1], small_tower)


def test_rank_sum_intersection(small_tower):
    spec = small_tower
    a = project([_m(0, 0, 0, 0), _m(0, 1, 0, 0)], [1], spec)
    b = project([_m(0, 1, 0, 0), SparseElement.from_dict({(0, 0, 0, 0): 1, (1, 0, 0, 0): 1}, 2)], [1], spec)
    assert rank(a) == 2 and rank(b) == 2
    assert span_sum_dim([a, b]) == 3
    assert span_intersection_dim(a, b) == 1
    assert not contains(a, b)
    assert contains(concat([a, b]), b)


def test_extract_basis_keeps_first_independent(small_tower):
    spec = small_tower
    x, y = _m(0, 1, 0, 0), _m(1, 0, 0, 0)
    xy = SparseElement.from_dict({(0, 1, 0, 0): 1, (1, 0, 0, 0): 1}, 2)
    basis = extract_basis([project([x, y], [1], spec), project([xy], [1], spec)])
    assert len(basis) == 2
    assert set(basis) == {x, y}


def test_concat_needs_same_space(small_tower):
    spec = small_tower
    with pytest.raises(ParameterError):
        concat([project([_m(0, 0, 0, 0)], [1], spec), project([_m(0, 0, 0, 0)], [2], spec)])


def test_coordinate_columns_keep_order(small_tower):
    spec = small_tower
    cols = coordinate_columns([_m(1, 2, 0, 0), _m(0, 0, 0, 0)], [1], spec)
    assert cols.shape == (6, 2)
    assert cols[5, 0] == 1 and cols[0, 1] == 1
    assert np.count_nonzero(cols) == 2


def test_set_product(small_tower):
    spec = small_tower
    prod = set_product([_m(0, 1, 0, 0), _m(0, 0, 0, 0)], [_m(0, 2, 0, 0)], spec)
    assert len(prod) == 2
    assert SparseElement.from_dict({(0, 0, 0, 0): 1, (0, 1, 0, 0): 1}, 2) in prod


def test_two_erasure_download_spans(two_erasure_tower):
    spec = two_erasure_tower
    failed = (1, 2)
    consts = constants(spec.mode, 2, 2, spec.k)
    S1 = project(build_S(1, failed, consts, spec), failed, spec)
    S2 = project(build_S(2, failed, consts, spec), failed, spec)
    assert rank(S1) == 273
    assert rank(S2) == 182
    assert span_sum_dim([S1, S2]) == 364
    assert span_intersection_dim(S1, S2) == 91

    witness = project(set_product(build_W(1, failed, consts, spec), build_W(2, failed, consts, spec), spec), failed, spec)
    assert rank(witness) == 91
    assert contains(S1, witness) and contains(S2, witness)
