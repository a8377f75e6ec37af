# Modules/monomial_space.py
# ------------------------------------------------------------
# Reduced F_p linear algebra for repair sets:
# - index space = monomials β^u ∏_{j ∈ failed} α_j^{e_j}
# - every repair-set element has F_p coefficients there, so F_p ranks
#   are the ranks over the repair subfield
# - rank / span sum / span intersection / greedy basis extraction
# ------------------------------------------------------------

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

from Modules.errors import ParameterError, SupportError
from Modules.gf_linalg import IncrementalBasis
from Modules.tower_field import SparseElement, TowerSpec, sparse_mul

logger = logging.getLogger(__name__)

Column = Tuple[Tuple[int, int], ...]


@dataclass(frozen=True)
class MonomialMatrix:
    failed: Tuple[int, ...]
    dims: Tuple[int, ...]  # (D, p_j for j in failed)
    p: int
    columns: Tuple[Column, ...]
    elements: Tuple[SparseElement, ...]

    @property
    def n_rows(self) -> int:
        return math.prod(self.dims)

    @property
    def n_cols(self) -> int:
        return len(self.columns)

    @property
    def axes(self) -> Tuple[int, ...]:
        """Tower axes spanned by the index space (β is axis 0)."""
        return (0,) + self.failed

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.n_rows, self.n_cols), dtype=np.int64)
        for c, col in enumerate(self.columns):
            for i, v in col:
                out[i, c] = v
        return out


def index_dims(failed: Sequence[int], spec: TowerSpec) -> Tuple[int, ...]:
    return (spec.D,) + tuple(spec.primes[j - 1] for j in failed)


def _column(el: SparseElement, failed: Tuple[int, ...], dims: Tuple[int, ...], p: int) -> Column:
    allowed = set(failed)
    entries: Dict[int, int] = {}
    for exps, c in el.terms:
        for j, e in enumerate(exps[1:], start=1):
            if e and j not in allowed:
                raise SupportError(f"element uses α_{j} outside the index space of failed set {list(failed)}")
        flat = int(np.ravel_multi_index((exps[0],) + tuple(exps[j] for j in failed), dims))
        entries[flat] = (entries.get(flat, 0) + c) % p
    return tuple(sorted((i, v) for i, v in entries.items() if v))


def project(elements: Iterable[SparseElement], failed: Sequence[int], spec: TowerSpec) -> MonomialMatrix:
    """
    Coordinate columns of `elements` in the reduced space of `failed`.

    Columns are ordered by leading index, ties by the full vector; repeated
    columns are kept once.
    """
    failed = tuple(sorted(failed))
    dims = index_dims(failed, spec)
    seen: Dict[Column, SparseElement] = {}
    for el in elements:
        col = _column(el, failed, dims, spec.p)
        seen.setdefault(col, el)
    order = sorted(seen, key=lambda col: (col[0][0] if col else -1, col))
    return MonomialMatrix(failed, dims, spec.p, tuple(order), tuple(seen[c] for c in order))


def coordinate_columns(elements: Sequence[SparseElement], failed: Sequence[int], spec: TowerSpec) -> np.ndarray:
    """Dense coordinate matrix, one column per element in the given order."""
    failed = tuple(sorted(failed))
    dims = index_dims(failed, spec)
    out = np.zeros((math.prod(dims), len(elements)), dtype=np.int64)
    for c, el in enumerate(elements):
        for i, v in _column(el, failed, dims, spec.p):
            out[i, c] = v
    return out


def _basis_of(columns: Iterable[Column], p: int) -> Tuple[IncrementalBasis, List[int]]:
    basis = IncrementalBasis(p)
    kept = []
    for idx, col in enumerate(columns):
        if basis.insert(dict(col)):
            kept.append(idx)
    return basis, kept


def rank(m: MonomialMatrix) -> int:
    return _basis_of(m.columns, m.p)[0].rank


def _same_space(sets: Sequence[MonomialMatrix]) -> None:
    if not sets:
        raise ParameterError("at least one matrix required")
    first = sets[0]
    for m in sets[1:]:
        if m.failed != first.failed or m.dims != first.dims or m.p != first.p:
            raise ParameterError(f"index spaces differ: failed {first.failed} vs {m.failed}")


def concat(sets: Sequence[MonomialMatrix]) -> MonomialMatrix:
    _same_space(sets)
    first = sets[0]
    return MonomialMatrix(
        first.failed,
        first.dims,
        first.p,
        tuple(c for m in sets for c in m.columns),
        tuple(e for m in sets for e in m.elements),
    )


def span_sum_dim(sets: Sequence[MonomialMatrix]) -> int:
    return rank(concat(sets))


def span_intersection_dim(a: MonomialMatrix, b: MonomialMatrix) -> int:
    return rank(a) + rank(b) - span_sum_dim([a, b])


def extract_basis(sets: Sequence[MonomialMatrix]) -> Tuple[SparseElement, ...]:
    """Greedy maximal independent subset of the concatenated columns, in order."""
    joined = concat(sets)
    _, kept = _basis_of(joined.columns, joined.p)
    logger.debug(f"extract_basis: kept {len(kept)} of {joined.n_cols} columns")
    return tuple(joined.elements[i] for i in kept)


def contains(big: MonomialMatrix, small: MonomialMatrix) -> bool:
    """span(small) ⊆ span(big)."""
    return span_sum_dim([big, small]) == rank(big)


def set_product(
    a: Sequence[SparseElement], b: Sequence[SparseElement], spec: TowerSpec
) -> Tuple[SparseElement, ...]:
    """{x·y : x ∈ a, y ∈ b} without repeats, in canonical order."""
    out = {sparse_mul(x, y, spec) for x in a for y in b}
    return tuple(sorted(out, key=lambda el: el.terms))
