"""
Exact linear algebra over F_p.

Dense solves run on galois.GF(p) arrays. The incremental basis keeps its
own sparse rows: bit-packed Python ints when p = 2, residue dicts otherwise.
Pivoting is always "first nonzero", so every result is reproducible.
"""

from __future__ import annotations

import logging
from typing import Dict, Mapping

import numpy as np

from Modules.base_algebra import prime_field
from Modules.errors import ConstructionError

logger = logging.getLogger(__name__)


# -----------------------------
# Solving A X = B
# -----------------------------
def _to_ints(x) -> np.ndarray:
    return x.view(np.ndarray).astype(np.int64)


def _solve_tall(a, b) -> np.ndarray:
    n_cols = a.shape[1]
    GF = type(a)
    reduced = np.concatenate([a, b], axis=1).row_reduce(ncols=n_cols)
    if not np.array_equal(reduced[:n_cols, :n_cols], GF.Identity(n_cols)):
        raise np.linalg.LinAlgError("rank deficient")
    # rows below the pivots must carry a zero right-hand side
    if np.any(reduced[n_cols:, n_cols:]):
        raise np.linalg.LinAlgError("inconsistent")
    return reduced[:n_cols, n_cols:]


def solve_mod_p(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """
    Unique X with A X = B over F_p, for A of full column rank.

    Raises ConstructionError when A is rank deficient or the system is
    inconsistent; callers only solve systems that must be solvable.
    """
    GF = prime_field(p)
    a = GF(np.asarray(a, dtype=np.int64) % p)
    b = GF(np.asarray(b, dtype=np.int64) % p)
    squeeze = b.ndim == 1
    if squeeze:
        b = b[:, None]
    if a.shape[0] != b.shape[0]:
        raise ValueError(f"row mismatch: A has {a.shape[0]} rows, B has {b.shape[0]}")
    if a.shape[0] < a.shape[1]:
        raise ConstructionError(f"underdetermined {a.shape[0]}x{a.shape[1]} system over F_{p}")
    try:
        x = np.linalg.solve(a, b) if a.shape[0] == a.shape[1] else _solve_tall(a, b)
    except np.linalg.LinAlgError as exc:
        raise ConstructionError(f"singular or inconsistent {a.shape[0]}x{a.shape[1]} system over F_{p}") from exc
    x = _to_ints(x)
    return x[:, 0] if squeeze else x


def inverse_mod_p(a: np.ndarray, p: int) -> np.ndarray:
    GF = prime_field(p)
    try:
        inv = np.linalg.inv(GF(np.asarray(a, dtype=np.int64) % p))
    except np.linalg.LinAlgError as exc:
        raise ConstructionError(f"singular {a.shape[0]}x{a.shape[1]} matrix over F_{p}") from exc
    return _to_ints(inv)


# -----------------------------
# Incremental sparse basis
# -----------------------------
class IncrementalBasis:
    """
    Greedy basis of sparse F_p vectors. `insert` reduces a vector by the
    pivots found so far and keeps it when something is left over.
    """

    def __init__(self, p: int):
        self.p = p
        self.rank = 0
        self._bits: Dict[int, int] = {}
        self._rows: Dict[int, Dict[int, int]] = {}

    def insert(self, vec: Mapping[int, int]) -> bool:
        if self.p == 2:
            return self._insert_bits(sum(1 << i for i, c in vec.items() if c % 2))
        return self._insert_residues({i: c % self.p for i, c in vec.items() if c % self.p})

    def _insert_bits(self, v: int) -> bool:
        while v:
            low = (v & -v).bit_length() - 1
            row = self._bits.get(low)
            if row is None:
                self._bits[low] = v
                self.rank += 1
                return True
            v ^= row
        return False

    def _insert_residues(self, v: Dict[int, int]) -> bool:
        p = self.p
        while v:
            low = min(v)
            row = self._rows.get(low)
            if row is None:
                scale = pow(v[low], p - 2, p)
                self._rows[low] = {i: c * scale % p for i, c in v.items()}
                self.rank += 1
                return True
            factor = v[low]
            for i, c in row.items():
                nc = (v.get(i, 0) - factor * c) % p
                if nc:
                    v[i] = nc
                else:
                    v.pop(i, None)
        return False
