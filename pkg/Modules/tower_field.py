# Modules/tower_field.py
# ------------------------------------------------------------
# Arithmetic in K = F_p(α_1, ..., α_n)(β):
# - TowerSpec: primes p_i, minimal polynomials f_i (deg p_i) and g (deg D)
# - FieldElement: dense residue tensor of shape (D, p_1, ..., p_n),
#   axis 0 = exponent of β, axis i = exponent of α_i
# - products by exponent convolution (Kronecker packing into one big
#   integer), then reduction by each generator's polynomial
# - traces down to F_A = F_p({α_j : j ∈ A}) by contracting the dropped
#   axes against Newton power sums
# - SparseElement for repair-set members (never materialized densely)
# ------------------------------------------------------------

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Dict, FrozenSet, Iterable, List, Mapping, Sequence, Tuple

import galois
import numpy as np

from Modules.base_algebra import (
    PrimeFieldPoly,
    companion_power,
    find_irreducible,
    hankel_trace_form,
    power_sums,
    reduction_table,
    select_primes,
)
from Modules.errors import ParameterError, SupportError
from Modules.gf_linalg import solve_mod_p

logger = logging.getLogger(__name__)

FieldElement = np.ndarray
Exponents = Tuple[int, ...]

UNIVERSAL = "universal"
TWO_ERASURE = "two-erasure"


# -----------------------------
# Tower description
# -----------------------------
@dataclass(frozen=True)
class Mode:
    """Universal(r) builds β of degree r!; TwoErasure(d) builds β of degree s_1 s_2."""

    kind: str
    param: int

    def __str__(self) -> str:
        return f"Universal(r={self.param})" if self.kind == UNIVERSAL else f"TwoErasure(d={self.param})"


def Universal(r: int) -> Mode:
    return Mode(UNIVERSAL, r)


def TwoErasure(d: int) -> Mode:
    return Mode(TWO_ERASURE, d)


@dataclass(frozen=True)
class TowerSpec:
    p: int
    mode: Mode
    n: int
    k: int
    D: int
    primes: Tuple[int, ...]
    min_polys: Tuple[PrimeFieldPoly, ...]
    beta_poly: PrimeFieldPoly
    trace_tables: Tuple[Tuple[int, ...], ...]  # [0] = β, [i] = α_i; power sums S_0..S_{2deg-2}

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.D,) + self.primes

    @property
    def degree(self) -> int:
        """l = [K : F_p] = D · ∏ p_i."""
        return self.D * math.prod(self.primes)

    def generator_poly(self, axis: int) -> PrimeFieldPoly:
        return self.beta_poly if axis == 0 else self.min_polys[axis - 1]


@dataclass(frozen=True)
class SubfieldMask:
    """The α-generators retained by a subfield F_A; β is never retained."""

    retained: FrozenSet[int]

    @classmethod
    def of(cls, retained: Iterable[int]) -> "SubfieldMask":
        return cls(frozenset(int(j) for j in retained))

    @classmethod
    def repair_field(cls, n: int, excluded: Iterable[int]) -> "SubfieldMask":
        """F_p({α_j : j ∉ excluded}), e.g. F_{[i]} for the first i failed nodes."""
        excluded = set(excluded)
        return cls(frozenset(j for j in range(1, n + 1) if j not in excluded))

    def dropped_axes(self, n: int) -> List[int]:
        return [0] + [j for j in range(1, n + 1) if j not in self.retained]


def beta_degree(mode: Mode, n: int, k: int) -> int:
    if mode.kind == UNIVERSAL:
        return math.factorial(mode.param)
    s1, s2 = mode.param + 1 - k, mode.param + 2 - k
    return s1 * s2


def validate_tower_params(p: int, mode: Mode, n: int, k: int) -> None:
    if not galois.is_prime(p):
        raise ParameterError(f"base field size p must be prime, got {p}")
    if not 1 <= k < n:
        raise ParameterError(f"1 <= k < n required, got n={n}, k={k}")
    if mode.kind == UNIVERSAL:
        if not 1 <= mode.param <= n - k:
            raise ParameterError(f"1 <= r <= n-k required, got r={mode.param}, n-k={n - k}")
    elif mode.kind == TWO_ERASURE:
        if not k <= mode.param <= n - 2:
            raise ParameterError(f"k <= d <= n-2 required, got d={mode.param}, k={k}, n={n}")
    else:
        raise ParameterError(f"unknown mode {mode.kind!r}")


def build_tower(p: int, mode: Mode, n: int, k: int) -> TowerSpec:
    """Primes, minimal polynomials and trace tables of the tower for (mode, n, k)."""
    validate_tower_params(p, mode, n, k)
    D = beta_degree(mode, n, k)
    primes = tuple(select_primes(n, D))
    if math.gcd(D, math.prod(primes)) != 1:
        raise ParameterError(f"gcd(D={D}, ∏p_i) must be 1 for β's polynomial to stay irreducible")

    min_polys = tuple(find_irreducible(p, q) for q in primes)
    beta_poly = find_irreducible(p, D)
    tables = tuple(
        tuple(power_sums(f, max(0, 2 * f.degree - 2))) for f in (beta_poly,) + min_polys
    )
    spec = TowerSpec(p, mode, n, k, D, primes, min_polys, beta_poly, tables)
    logger.info(f"Tower built: p={p}, {mode}, n={n}, k={k}, D={D}, primes={list(primes)}, l={spec.degree}")
    return spec


# -----------------------------
# Cached per-generator tables
# -----------------------------
@lru_cache(maxsize=None)
def _reduction(spec: TowerSpec, axis: int) -> np.ndarray:
    f = spec.generator_poly(axis)
    return reduction_table(f, 2 * f.degree - 1)


@lru_cache(maxsize=None)
def _companion(spec: TowerSpec, axis: int, e: int) -> np.ndarray:
    return companion_power(spec.generator_poly(axis), e)


@lru_cache(maxsize=None)
def _hankel(spec: TowerSpec, axis: int) -> np.ndarray:
    return hankel_trace_form(spec.generator_poly(axis))


def trace_vector(spec: TowerSpec, axis: int) -> np.ndarray:
    deg = spec.shape[axis]
    return np.array(spec.trace_tables[axis][:deg], dtype=np.int64)


def trace_form(spec: TowerSpec, axes: Sequence[int]) -> np.ndarray:
    """tr(μ_a μ_b) over the monomials in the given generator axes (C order), an F_p matrix."""
    return reduce(np.kron, [_hankel(spec, ax) for ax in axes], np.ones((1, 1), dtype=np.int64)) % spec.p


# -----------------------------
# Dense elements
# -----------------------------
def _check(a: FieldElement, spec: TowerSpec) -> None:
    if a.shape != spec.shape:
        raise ParameterError(f"element shape {a.shape} does not match tower shape {spec.shape}")


def zero(spec: TowerSpec) -> FieldElement:
    return np.zeros(spec.shape, dtype=np.int64)


def one(spec: TowerSpec) -> FieldElement:
    return monomial(0, [0] * spec.n, spec)


def monomial(u: int, exps: Sequence[int], spec: TowerSpec) -> FieldElement:
    """β^u ∏ α_i^{exps[i]} with coefficient 1."""
    exps = tuple(exps)
    if len(exps) != spec.n:
        raise ParameterError(f"expected {spec.n} α-exponents, got {len(exps)}")
    if not 0 <= u < spec.D or any(not 0 <= e < q for e, q in zip(exps, spec.primes)):
        raise ParameterError(f"exponents ({u}, {exps}) out of range for shape {spec.shape}")
    out = zero(spec)
    out[(u,) + exps] = 1
    return out


def constant(c: int, spec: TowerSpec) -> FieldElement:
    return one(spec) * (c % spec.p)


def add(a: FieldElement, b: FieldElement, spec: TowerSpec) -> FieldElement:
    _check(a, spec)
    _check(b, spec)
    return (a + b) % spec.p


def neg(a: FieldElement, spec: TowerSpec) -> FieldElement:
    _check(a, spec)
    return (-a) % spec.p


def sub(a: FieldElement, b: FieldElement, spec: TowerSpec) -> FieldElement:
    return add(a, neg(b, spec), spec)


def scale(a: FieldElement, c: int, spec: TowerSpec) -> FieldElement:
    return (a * (c % spec.p)) % spec.p


def is_zero(a: FieldElement) -> bool:
    return not np.any(a)


def random_element(spec: TowerSpec, rng: np.random.Generator) -> FieldElement:
    return rng.integers(0, spec.p, size=spec.shape, dtype=np.int64)


def active_axes(*elements: FieldElement) -> List[int]:
    """Axes along which some element has a nonzero coefficient at a positive exponent."""
    ndim = elements[0].ndim
    axes = []
    for ax in range(ndim):
        for a in elements:
            if a.shape[ax] > 1 and np.any(np.take(a, range(1, a.shape[ax]), axis=ax)):
                axes.append(ax)
                break
    return axes


def _axis_index(ndim: int, axes: Sequence[int]) -> tuple:
    return tuple(slice(None) if ax in axes else 0 for ax in range(ndim))


def _pack(arr: np.ndarray, width: int) -> int:
    return int.from_bytes(np.ascontiguousarray(arr, dtype=f"<u{width}").tobytes(), "little")


def mul(a: FieldElement, b: FieldElement, spec: TowerSpec) -> FieldElement:
    """
    Canonical product. The exponent-wise convolution is computed in one big
    integer multiplication (each coefficient gets a fixed-width slot wide
    enough to hold a full convolution sum), then every active generator
    axis is reduced by its polynomial.
    """
    _check(a, spec)
    _check(b, spec)
    p = spec.p
    axes = active_axes(a, b)
    idx = _axis_index(a.ndim, axes)
    out = zero(spec)
    if not axes:
        out[idx] = (a[idx] * b[idx]) % p
        return out

    sub_a, sub_b = a[idx], b[idx]
    conv_shape = tuple(2 * s - 1 for s in sub_a.shape)
    bound = sub_a.size * (p - 1) ** 2
    width = next(w for w in (1, 2, 4, 8) if bound < 2 ** (8 * w))

    slots = np.zeros(conv_shape, dtype=np.int64)
    place = tuple(slice(0, s) for s in sub_a.shape)
    slots[place] = sub_a
    ia = _pack(slots, width)
    slots[...] = 0
    slots[place] = sub_b
    ib = _pack(slots, width)

    raw = (ia * ib).to_bytes(slots.size * width, "little")
    conv = np.frombuffer(raw, dtype=f"<u{width}").astype(np.int64).reshape(conv_shape) % p

    for pos, ax in enumerate(axes):
        table = _reduction(spec, ax)
        conv = np.moveaxis(np.tensordot(conv, table, axes=([pos], [0])), -1, pos) % p
    out[idx] = conv
    return out


def mul_monomial(a: FieldElement, u: int, exps: Sequence[int], spec: TowerSpec) -> FieldElement:
    """a · β^u ∏ α_i^{exps[i]} via companion-matrix powers, one axis at a time."""
    _check(a, spec)
    out = a
    for ax, e in enumerate((u,) + tuple(exps)):
        if e:
            c = _companion(spec, ax, e)
            out = np.moveaxis(np.tensordot(c, out, axes=([1], [ax])), 0, ax) % spec.p
    return out


def power(a: FieldElement, e: int, spec: TowerSpec) -> FieldElement:
    result = one(spec)
    base = a
    while e > 0:
        if e & 1:
            result = mul(result, base, spec)
        base = mul(base, base, spec)
        e >>= 1
    return result


def inv(a: FieldElement, spec: TowerSpec) -> FieldElement:
    """
    Inverse by solving a·x = 1. The system lives in the smallest sub-tower
    containing a's support, which is itself a field and so holds a^{-1}.
    """
    _check(a, spec)
    if is_zero(a):
        raise ZeroDivisionError("inverse of the zero element")
    axes = active_axes(a)
    idx = _axis_index(a.ndim, axes)
    sub_shape = tuple(spec.shape[ax] for ax in axes)
    dim = math.prod(sub_shape)

    columns = np.zeros((dim, dim), dtype=np.int64)
    for col, sub_exp in enumerate(np.ndindex(*sub_shape)):
        full = [0] * a.ndim
        for ax, e in zip(axes, sub_exp):
            full[ax] = e
        columns[:, col] = mul_monomial(a, full[0], full[1:], spec)[idx].ravel()
    rhs = np.zeros(dim, dtype=np.int64)
    rhs[0] = 1
    x = solve_mod_p(columns, rhs, spec.p)

    out = zero(spec)
    out[idx] = x.reshape(sub_shape)
    return out


# -----------------------------
# Subfields and traces
# -----------------------------
def extension_degree(mask: SubfieldMask, spec: TowerSpec) -> int:
    """[K : F_A] = D · ∏_{j ∉ A} p_j."""
    return math.prod(spec.shape[ax] for ax in mask.dropped_axes(spec.n))


def in_subfield(a: FieldElement, mask: SubfieldMask, spec: TowerSpec) -> bool:
    return set(active_axes(a)).isdisjoint(mask.dropped_axes(spec.n))


def trace_to(a: FieldElement, mask: SubfieldMask, spec: TowerSpec) -> FieldElement:
    """tr_{K/F_A}(a): contract β and every dropped α axis against its power sums."""
    _check(a, spec)
    dropped = mask.dropped_axes(spec.n)
    contracted = a
    for ax in sorted(dropped, reverse=True):
        contracted = np.tensordot(contracted, trace_vector(spec, ax), axes=([ax], [0])) % spec.p
    out = zero(spec)
    out[tuple(0 if ax in dropped else slice(None) for ax in range(a.ndim))] = contracted
    return out


def trace_between(a: FieldElement, upper: SubfieldMask, lower: SubfieldMask, spec: TowerSpec) -> FieldElement:
    """tr_{F_upper/F_lower}(a) for a ∈ F_upper; lower must be a subset of upper."""
    _check(a, spec)
    if not lower.retained <= upper.retained:
        raise ParameterError(f"F_{sorted(lower.retained)} is not a subfield of F_{sorted(upper.retained)}")
    if not in_subfield(a, upper, spec):
        raise SupportError(f"element is not in F_{sorted(upper.retained)}")
    dropped = sorted(upper.retained - lower.retained)
    contracted = a
    for ax in sorted(dropped, reverse=True):
        contracted = np.tensordot(contracted, trace_vector(spec, ax), axes=([ax], [0])) % spec.p
    out = zero(spec)
    out[tuple(0 if ax in dropped else slice(None) for ax in range(a.ndim))] = contracted
    return out


def coordinate_matrix(a: FieldElement, axes: Sequence[int], zero_axes: Sequence[int] = ()) -> np.ndarray:
    """
    Coordinates of a over the monomials in `axes` (C order), each coefficient
    flattened over the remaining axes in ascending order: shape (∏ deg, rest).
    Axes in `zero_axes` are read at exponent 0 only.
    """
    axes = list(axes)
    moved = np.moveaxis(a, axes, list(range(len(axes))))
    rest = [ax for ax in range(a.ndim) if ax not in axes]
    moved = moved[tuple([slice(None)] * len(axes) + [0 if ax in zero_axes else slice(None) for ax in rest])]
    rows = math.prod(a.shape[ax] for ax in axes)
    return moved.reshape(rows, -1)


def from_coordinate_matrix(
    mat: np.ndarray, axes: Sequence[int], spec: TowerSpec, zero_axes: Sequence[int] = ()
) -> FieldElement:
    """Inverse of coordinate_matrix; `zero_axes` are filled at exponent 0."""
    axes = list(axes)
    rest = [ax for ax in range(len(spec.shape)) if ax not in axes]
    moved = np.zeros(tuple(spec.shape[ax] for ax in axes + rest), dtype=np.int64)
    idx = tuple([slice(None)] * len(axes) + [0 if ax in zero_axes else slice(None) for ax in rest])
    moved[idx] = np.asarray(mat, dtype=np.int64).reshape(moved[idx].shape)
    return np.moveaxis(moved, list(range(len(axes))), axes) % spec.p


# -----------------------------
# Serialization
# -----------------------------
def to_bytes(a: FieldElement, spec: TowerSpec) -> bytes:
    """Little-endian base-p digits in canonical order (β major, then α_1..α_n)."""
    _check(a, spec)
    flat = a.ravel()
    if spec.p == 2:
        return np.packbits(flat.astype(np.uint8), bitorder="little").tobytes()
    value = 0
    for c in flat[::-1].tolist():
        value = value * spec.p + c
    n_bytes = ((spec.p ** spec.degree - 1).bit_length() + 7) // 8
    return value.to_bytes(n_bytes, "little")


def from_bytes(raw: bytes, spec: TowerSpec) -> FieldElement:
    if spec.p == 2:
        bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")
        return bits[: spec.degree].astype(np.int64).reshape(spec.shape)
    value = int.from_bytes(raw, "little")
    digits = []
    for _ in range(spec.degree):
        value, c = divmod(value, spec.p)
        digits.append(c)
    return np.array(digits, dtype=np.int64).reshape(spec.shape)


def to_hex(a: FieldElement, spec: TowerSpec) -> str:
    return to_bytes(a, spec).hex()


def from_hex(text: str, spec: TowerSpec) -> FieldElement:
    return from_bytes(bytes.fromhex(text), spec)


# -----------------------------
# Sparse elements
# -----------------------------
@dataclass(frozen=True)
class SparseElement:
    """
    Element with few nonzero coefficients, keyed by full exponent tuples
    (u, e_1, ..., e_n). Terms are kept sorted, so equal elements hash equal.
    """

    terms: Tuple[Tuple[Exponents, int], ...]

    @classmethod
    def from_dict(cls, coeffs: Mapping[Exponents, int], p: int) -> "SparseElement":
        return cls(tuple(sorted((tuple(e), c % p) for e, c in coeffs.items() if c % p)))

    @classmethod
    def monomial(cls, exps: Exponents) -> "SparseElement":
        return cls(((tuple(exps), 1),))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def support_axes(self) -> FrozenSet[int]:
        return frozenset(ax for e, _ in self.terms for ax, x in enumerate(e) if x)


def _reduce_axis_power(spec: TowerSpec, axis: int, e: int) -> List[Tuple[int, int]]:
    deg = spec.shape[axis]
    if e < deg:
        return [(e, 1)]
    f = spec.generator_poly(axis)
    row = reduction_table(f, e + 1)[e] if e >= 2 * deg - 1 else _reduction(spec, axis)[e]
    return [(x, int(c)) for x, c in enumerate(row) if c]


def sparse_mul(a: SparseElement, b: SparseElement, spec: TowerSpec) -> SparseElement:
    """Product with every exponent reduced below its generator's degree."""
    acc: Dict[Exponents, int] = {}
    p = spec.p
    for ea, ca in a.terms:
        for eb, cb in b.terms:
            per_axis = [_reduce_axis_power(spec, ax, x + y) for ax, (x, y) in enumerate(zip(ea, eb))]
            for combo in itertools.product(*per_axis):
                coeff = ca * cb
                for _, c in combo:
                    coeff *= c
                key = tuple(x for x, _ in combo)
                acc[key] = (acc.get(key, 0) + coeff) % p
    return SparseElement.from_dict(acc, p)


def sparse_shift(a: SparseElement, exps: Exponents, spec: TowerSpec) -> SparseElement:
    """a times a single monomial; exact whenever no exponent overflows."""
    shifted = {}
    for e, c in a.terms:
        key = tuple(x + y for x, y in zip(e, exps))
        if any(x >= q for x, q in zip(key, spec.shape)):
            return sparse_mul(a, SparseElement.monomial(exps), spec)
        shifted[key] = c
    return SparseElement(tuple(sorted(shifted.items())))


def densify(a: SparseElement, spec: TowerSpec) -> FieldElement:
    out = zero(spec)
    for e, c in a.terms:
        if len(e) != len(spec.shape) or any(not 0 <= x < q for x, q in zip(e, spec.shape)):
            raise SupportError(f"term {e} outside tower shape {spec.shape}")
        out[e] = c
    return out
