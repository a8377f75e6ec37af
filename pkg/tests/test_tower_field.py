import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from Modules import tower_field as tf
from Modules.errors import ParameterError, SupportError
from Modules.gf_linalg import inverse_mod_p
from Modules.tower_field import SparseElement, SubfieldMask, TwoErasure, Universal, build_tower

seeds = st.integers(0, 2**32 - 1)


def _rand(spec, seed):
    return tf.random_element(spec, np.random.Generator(np.random.PCG64(seed)))


def _in_mask(spec, seed, retained):
    """Random element of F_p({α_j : j ∈ retained})."""
    a = _rand(spec, seed)
    keep = tuple(slice(None) if ax in retained else 0 for ax in range(len(spec.shape)))
    out = tf.zero(spec)
    out[keep] = a[keep]
    return out


# -----------------------------
# Construction
# -----------------------------
def test_small_tower_parameters(small_tower):
    assert small_tower.D == 2
    assert small_tower.primes == (3, 5, 7)
    assert small_tower.degree == 210
    assert small_tower.shape == (2, 3, 5, 7)
    assert small_tower.beta_poly.coeffs == (1, 1, 1)
    assert small_tower.min_polys[0].coeffs == (1, 1, 0, 1)


def test_degrees_of_other_towers(n4k2_tower, two_erasure_small, two_erasure_tower, r3_tower):
    assert n4k2_tower.degree == 2310
    assert two_erasure_small.D == 2 and two_erasure_small.degree == 2310
    assert two_erasure_tower.D == 6 and two_erasure_tower.primes == (7, 13, 19, 31)
    assert r3_tower.degree == 321594


@pytest.mark.parametrize(
    "p,mode,n,k",
    [
        (4, Universal(1), 3, 1),
        (2, Universal(3), 3, 1),
        (2, Universal(1), 3, 3),
        (2, TwoErasure(3), 4, 1),
        (2, TwoErasure(0), 4, 1),
    ],
)
def test_build_tower_rejects(p, mode, n, k):
    with pytest.raises(ParameterError):
        build_tower(p, mode, n, k)


# -----------------------------
# Arithmetic
# -----------------------------
def test_generator_relation(small_tower):
    spec = small_tower
    a2 = tf.monomial(0, [2, 0, 0], spec)
    a1 = tf.monomial(0, [1, 0, 0], spec)
    expected = tf.add(a1, tf.one(spec), spec)  # α_1^3 = α_1 + 1
    assert np.array_equal(tf.mul(a2, a1, spec), expected)
    assert np.array_equal(tf.power(a1, 3, spec), expected)


@settings(max_examples=10, deadline=None)
@given(sa=seeds, sb=seeds, sc=seeds)
def test_field_axioms(small_tower, sa, sb, sc):
    spec = small_tower
    a, b, c = _rand(spec, sa), _rand(spec, sb), _rand(spec, sc)
    assert np.array_equal(tf.mul(a, b, spec), tf.mul(b, a, spec))
    assert np.array_equal(tf.mul(tf.mul(a, b, spec), c, spec), tf.mul(a, tf.mul(b, c, spec), spec))
    left = tf.mul(a, tf.add(b, c, spec), spec)
    assert np.array_equal(left, tf.add(tf.mul(a, b, spec), tf.mul(a, c, spec), spec))
    assert np.array_equal(tf.mul(a, tf.one(spec), spec), a)


@settings(max_examples=10, deadline=None)
@given(seed=seeds, u=st.integers(0, 1), e1=st.integers(0, 2), e3=st.integers(0, 6))
def test_mul_monomial_matches_mul(small_tower, seed, u, e1, e3):
    spec = small_tower
    a = _rand(spec, seed)
    m = tf.monomial(u, [e1, 0, e3], spec)
    assert np.array_equal(tf.mul_monomial(a, u, [e1, 0, e3], spec), tf.mul(a, m, spec))


def test_mul_on_p5_tower(p5_tower, rng):
    spec = p5_tower
    a, b = tf.random_element(spec, rng), tf.random_element(spec, rng)
    assert np.array_equal(tf.mul(a, tf.add(b, tf.one(spec), spec), spec), tf.add(tf.mul(a, b, spec), a, spec))
    assert np.array_equal(tf.scale(tf.one(spec), 7, spec), tf.constant(2, spec))


@settings(max_examples=8, deadline=None)
@given(seed=seeds)
def test_inverse(small_tower, seed):
    spec = small_tower
    a = _rand(spec, seed)
    if tf.is_zero(a):
        return
    assert np.array_equal(tf.mul(a, tf.inv(a, spec), spec), tf.one(spec))


def test_inverse_stays_in_support_subfield(small_tower):
    spec = small_tower
    a = tf.add(tf.monomial(0, [0, 1, 0], spec), tf.one(spec), spec)
    b = tf.inv(a, spec)
    assert set(tf.active_axes(b)) <= {2}
    assert np.array_equal(tf.mul(a, b, spec), tf.one(spec))


def test_inverse_of_zero(small_tower):
    with pytest.raises(ZeroDivisionError):
        tf.inv(tf.zero(small_tower), small_tower)


def test_inverse_over_p5(p5_tower, rng):
    spec = p5_tower
    a = tf.random_element(spec, rng)
    a[0, 0, 0, 0] = 1  # nonzero
    assert np.array_equal(tf.mul(a, tf.inv(a, spec), spec), tf.one(spec))


def test_negation_over_p5(p5_tower, rng):
    spec = p5_tower
    a, b = tf.random_element(spec, rng), tf.random_element(spec, rng)
    assert tf.is_zero(tf.add(a, tf.neg(a, spec), spec))
    assert np.array_equal(tf.sub(a, b, spec), (a - b) % 5)
    assert np.array_equal(tf.neg(tf.one(spec), spec), tf.scale(tf.one(spec), 4, spec))


# -----------------------------
# Traces
# -----------------------------
def test_trace_examples(small_tower):
    spec = small_tower
    mask = SubfieldMask.of([2, 3])
    assert tf.is_zero(tf.trace_to(tf.one(spec), mask, spec))  # [K:F] = 6 is even
    x = tf.mul(tf.monomial(1, [0, 0, 0], spec), tf.monomial(0, [2, 0, 0], spec), spec)
    x = tf.mul(x, tf.monomial(0, [1, 0, 0], spec), spec)  # β α_1^3
    assert np.array_equal(tf.trace_to(x, mask, spec), tf.one(spec))


def test_extension_degree(small_tower):
    assert tf.extension_degree(SubfieldMask.repair_field(3, [1]), small_tower) == 6
    assert tf.extension_degree(SubfieldMask.of([]), small_tower) == 210


@settings(max_examples=10, deadline=None)
@given(sa=seeds, sc=seeds)
def test_trace_is_subfield_linear(small_tower, sa, sc):
    spec = small_tower
    mask = SubfieldMask.of([2, 3])
    a, c = _rand(spec, sa), _in_mask(spec, sc, {2, 3})
    tr = tf.trace_to(a, mask, spec)
    assert tf.in_subfield(tr, mask, spec)
    assert np.array_equal(tf.trace_to(tf.mul(a, c, spec), mask, spec), tf.mul(c, tr, spec))


@settings(max_examples=10, deadline=None)
@given(seed=seeds)
def test_trace_transitivity(small_tower, seed):
    spec = small_tower
    upper, lower = SubfieldMask.of([2, 3]), SubfieldMask.of([3])
    a = _rand(spec, seed)
    step = tf.trace_between(tf.trace_to(a, upper, spec), upper, lower, spec)
    assert np.array_equal(step, tf.trace_to(a, lower, spec))


def test_trace_between_checks_arguments(small_tower, rng):
    spec = small_tower
    with pytest.raises(ParameterError):
        tf.trace_between(tf.one(spec), SubfieldMask.of([3]), SubfieldMask.of([2]), spec)
    with pytest.raises(SupportError):
        tf.trace_between(tf.random_element(spec, rng), SubfieldMask.of([3]), SubfieldMask.of([]), spec)


def test_trace_form_matches_traces(small_tower):
    spec = small_tower
    mask = SubfieldMask.of([2, 3])
    form = tf.trace_form(spec, (0, 1))
    exps = list(np.ndindex(2, 3))
    for a, (ua, ea) in enumerate(exps):
        for b, (ub, eb) in enumerate(exps):
            prod = tf.mul_monomial(tf.monomial(ua, [ea, 0, 0], spec), ub, [eb, 0, 0], spec)
            assert np.array_equal(tf.trace_to(prod, mask, spec), tf.constant(int(form[a, b]), spec))
    inverse_mod_p(form, spec.p)  # nondegenerate


# -----------------------------
# Coordinates and serialization
# -----------------------------
def test_coordinate_matrix_inverse(small_tower, rng):
    spec = small_tower
    a = tf.random_element(spec, rng)
    mat = tf.coordinate_matrix(a, (0, 2))
    assert mat.shape == (10, 21)
    assert np.array_equal(tf.from_coordinate_matrix(mat, (0, 2), spec), a)
    assert mat[1 * 5 + 3, 2 * 7 + 4] == a[1, 2, 3, 4]


def test_coordinate_matrix_zero_axes(small_tower, rng):
    spec = small_tower
    a = tf.random_element(spec, rng)
    mat = tf.coordinate_matrix(a, (2,), zero_axes=(0, 1))
    assert mat.shape == (5, 7)
    assert np.array_equal(mat, a[0, 0])


def test_serialization(small_tower, p5_tower, rng):
    for spec in (small_tower, p5_tower):
        a = tf.random_element(spec, rng)
        assert np.array_equal(tf.from_hex(tf.to_hex(a, spec), spec), a)
    assert len(tf.to_bytes(tf.one(small_tower), small_tower)) == 27


# -----------------------------
# Sparse elements
# -----------------------------
def test_sparse_mul_matches_dense(small_tower):
    spec = small_tower
    a = SparseElement.from_dict({(1, 2, 0, 0): 1, (0, 0, 4, 6): 1}, spec.p)
    b = SparseElement.from_dict({(1, 1, 0, 3): 1, (0, 2, 1, 0): 3}, spec.p)
    assert np.array_equal(
        tf.densify(tf.sparse_mul(a, b, spec), spec),
        tf.mul(tf.densify(a, spec), tf.densify(b, spec), spec),
    )


def test_sparse_shift_falls_back_on_overflow(small_tower):
    spec = small_tower
    a = SparseElement.monomial((0, 2, 0, 0))
    shifted = tf.sparse_shift(a, (0, 1, 0, 0), spec)  # α_1^3 = α_1 + 1
    assert shifted == SparseElement.from_dict({(0, 0, 0, 0): 1, (0, 1, 0, 0): 1}, spec.p)
    assert tf.sparse_shift(a, (1, 0, 2, 0), spec) == SparseElement.monomial((1, 2, 2, 0))


def test_sparse_helpers(small_tower):
    spec = small_tower
    a = SparseElement.from_dict({(1, 0, 3, 0): 1, (0, 0, 0, 0): 2}, spec.p)
    assert a.support_axes() == frozenset({0, 2})
    with pytest.raises(SupportError):
        tf.densify(SparseElement.monomial((0, 3, 0, 0)), spec)
