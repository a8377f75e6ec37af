# Modules/repair_engine.py
# ------------------------------------------------------------
# Repair of h failed nodes from d helpers:
# - DownloadPlan: download sets S_i, merged basis B, bandwidth accounting
#   (built without touching codeword values, so it scales to large towers)
# - RepairPlan: DownloadPlan + per-position reconstruction data
#   (annihilators, dual-basis Gram inverse, fold coefficients)
# - helper_payload: tr_{K/F_[h]}(γ v_j c_j) for γ ∈ B, as F_p residues
# - reconstruct: positions 1..h in order, each using helper traces and
#   the nodes already rebuilt
# ------------------------------------------------------------

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Mapping, Sequence, Tuple

import numpy as np

from Modules import tower_field as tf
from Modules.errors import ParameterError, ConstructionError
from Modules.gf_linalg import inverse_mod_p, solve_mod_p
from Modules.grs_code import CodeSpec, annihilator, evaluate
from Modules.monomial_space import coordinate_columns, extract_basis, project
from Modules.repair_sets import (
    RepairConstants,
    build_S,
    build_T,
    constants,
    expected_S_size,
    is_supported,
    reconstruction_set,
)
from Modules.tower_field import FieldElement, SparseElement, SubfieldMask, TowerSpec

logger = logging.getLogger(__name__)


# -----------------------------
# Bandwidth formulas
# -----------------------------
def cutset_bound(h: int, d: int, k: int, l: int) -> int:
    """h·d·l / (h + d - k) base-field symbols."""
    num, den = h * d * l, h + d - k
    if den <= 0 or num % den:
        raise ParameterError(f"h+d-k = {den} must be positive and divide h·d·l = {num}")
    return num // den


def naive_bandwidth(k: int, l: int) -> int:
    """Download k whole nodes and re-encode."""
    return k * l


# -----------------------------
# Plans
# -----------------------------
@dataclass(frozen=True, eq=False)
class DownloadPlan:
    spec: TowerSpec
    failed: Tuple[int, ...]
    helpers: Tuple[int, ...]
    consts: RepairConstants
    S_sets: Tuple[Tuple[SparseElement, ...], ...]
    download_basis: Tuple[SparseElement, ...]
    basis_matrix: np.ndarray  # reduced coordinates of B, one column per element
    subfield_dim: int  # [F_[h] : F_p]

    @property
    def h(self) -> int:
        return len(self.failed)

    @property
    def d(self) -> int:
        return len(self.helpers)

    @property
    def axes(self) -> Tuple[int, ...]:
        return (0,) + self.failed

    @property
    def bandwidth_per_helper(self) -> int:
        return len(self.download_basis) * self.subfield_dim

    @property
    def total_bandwidth(self) -> int:
        return self.d * self.bandwidth_per_helper


@dataclass(frozen=True, eq=False)
class PositionPlan:
    pos: int
    node: int
    axes: Tuple[int, ...]  # β and the first `pos` failed nodes
    s_i: int
    n_gamma: int  # |T_i|
    t_matrix: np.ndarray  # reduced coordinates of T_i
    trace_form: np.ndarray  # tr_{K/F_[i]} on monomials of `axes`
    gram_inverse: np.ndarray
    fold_axes: Tuple[int, ...]  # failed nodes after this position
    fold_coeffs: np.ndarray  # B-coordinates of γ·μ_q, columns in (γ, q) order
    fold_inverse: np.ndarray
    helper_factors: Dict[int, Tuple[FieldElement, ...]]  # α_j^t h_i(α_j), t < s_i
    earlier_factors: Dict[int, FieldElement]  # v_m h_i(α_m) for nodes rebuilt earlier
    lam_inv: FieldElement  # (v_i h_i(α_i))^{-1}


@dataclass(frozen=True, eq=False)
class RepairPlan:
    code: CodeSpec
    download: DownloadPlan
    payload_map: np.ndarray  # B^T · H_h, maps helper coordinates to trace symbols
    positions: Tuple[PositionPlan, ...]

    @property
    def failed(self) -> Tuple[int, ...]:
        return self.download.failed

    @property
    def helpers(self) -> Tuple[int, ...]:
        return self.download.helpers


@dataclass(frozen=True, eq=False)
class HelperPayload:
    helper: int
    symbols: np.ndarray  # F_p residues, B order then subfield monomial order


def validate_sets(spec: TowerSpec, failed: Sequence[int], helpers: Sequence[int]) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    n = spec.n
    F, R = tuple(sorted(set(failed))), tuple(sorted(set(helpers)))
    if len(F) != len(failed) or len(R) != len(helpers):
        raise ParameterError("failed and helper sets must not repeat nodes")
    if any(not 1 <= j <= n for j in F + R):
        raise ParameterError(f"node indices must lie in 1..{n}")
    if not F:
        raise ParameterError("at least one failed node required")
    if set(F) & set(R):
        raise ParameterError(f"failed {list(F)} and helpers {list(R)} must be disjoint")
    h, d = len(F), len(R)
    if d < spec.k:
        raise ParameterError(f"d >= k required, got d={d}, k={spec.k}")
    if d > n - h:
        raise ParameterError(f"d <= n-h required, got d={d}, n-h={n - h}")
    if not is_supported(spec.mode, h, d, spec.k, n):
        raise ParameterError(f"(h={h}, d={d}) is not supported by a {spec.mode} tower with k={spec.k}")
    return F, R


def make_download_plan(spec: TowerSpec, failed: Sequence[int], helpers: Sequence[int]) -> DownloadPlan:
    F, R = validate_sets(spec, failed, helpers)
    h, d = len(F), len(R)
    consts = constants(spec.mode, h, d, spec.k, spec.n)

    S_sets = []
    for i in range(1, h + 1):
        S = build_S(i, F, consts, spec)
        if len(S) != expected_S_size(i, F, consts, spec):
            raise ConstructionError(f"|S_{i}| = {len(S)}, expected {expected_S_size(i, F, consts, spec)}")
        S_sets.append(S)

    B = extract_basis([project(S, F, spec) for S in S_sets])
    sub_dim = spec.degree // tf.extension_degree(SubfieldMask.repair_field(spec.n, F), spec)
    plan = DownloadPlan(spec, F, R, consts, tuple(S_sets), B, coordinate_columns(B, F, spec), sub_dim)

    bound = cutset_bound(h, d, spec.k, spec.degree)
    if plan.total_bandwidth != bound:
        raise ConstructionError(f"planned bandwidth {plan.total_bandwidth} != cut-set bound {bound}")
    logger.info(f"Download plan: failed={list(F)}, helpers={list(R)}, |B|={len(B)}, "
                f"per-helper={plan.bandwidth_per_helper}, total={plan.total_bandwidth}")
    return plan


def _position_plan(code: CodeSpec, dl: DownloadPlan, pos: int) -> PositionPlan:
    spec, F, R, consts = code.spec, dl.failed, dl.helpers, dl.consts
    p = spec.p
    node = F[pos - 1]
    axes = (0,) + F[:pos]
    s_i = consts.s_at(pos)

    # dual basis of {γ α_i^t} over F_[i]
    recon = reconstruction_set(pos, F, consts, spec)
    trace_i = tf.trace_form(spec, axes)
    gram = (coordinate_columns(recon, F[:pos], spec).T @ trace_i) % p
    gram_inverse = inverse_mod_p(gram, p)

    # γ μ_q ∈ S_i in terms of B, and the trace form over the folded generators
    T = build_T(pos, F, consts, spec)
    fold_axes = F[pos:]
    needed = [
        tf.sparse_shift(g, tuple(_fold_exps(spec, fold_axes, q)), spec)
        for g in T
        for q in np.ndindex(*(spec.shape[ax] for ax in fold_axes))
    ]
    fold_coeffs = solve_mod_p(dl.basis_matrix, coordinate_columns(needed, F, spec), p)
    fold_inverse = inverse_mod_p(tf.trace_form(spec, fold_axes), p)

    # annihilator of every node that is neither a helper nor already rebuilt
    roots = [j for j in range(1, spec.n + 1) if j not in R and j not in F[:pos]]
    h_poly = annihilator([code.omega[j - 1] for j in roots], spec)
    helper_factors = {
        j: tuple(
            tf.mul(tf.power(code.omega[j - 1], t, spec), evaluate(h_poly, code.omega[j - 1], spec), spec)
            for t in range(s_i)
        )
        for j in R
    }
    earlier_factors = {
        m: tf.mul(code.v[m - 1], evaluate(h_poly, code.omega[m - 1], spec), spec) for m in F[: pos - 1]
    }
    lam_inv = tf.one(spec)
    for j in R + F[: pos - 1]:
        lam_inv = tf.mul(lam_inv, tf.sub(code.omega[node - 1], code.omega[j - 1], spec), spec)

    return PositionPlan(
        pos, node, axes, s_i, len(T), coordinate_columns(T, F[:pos], spec), trace_i, gram_inverse,
        fold_axes, fold_coeffs, fold_inverse, helper_factors, earlier_factors, lam_inv,
    )


def _fold_exps(spec: TowerSpec, fold_axes: Sequence[int], q: Sequence[int]) -> List[int]:
    exps = [0] * (spec.n + 1)
    for ax, e in zip(fold_axes, q):
        exps[ax] = e
    return exps


def make_plan(code: CodeSpec, failed: Sequence[int], helpers: Sequence[int]) -> RepairPlan:
    dl = make_download_plan(code.spec, failed, helpers)
    payload_map = (dl.basis_matrix.T @ tf.trace_form(code.spec, dl.axes)) % code.spec.p
    positions = tuple(_position_plan(code, dl, i) for i in range(1, dl.h + 1))
    logger.info(f"Repair plan ready for failed={list(dl.failed)}")
    return RepairPlan(code, dl, payload_map, positions)


# -----------------------------
# Helpers and collector
# -----------------------------
def helper_payload(plan: RepairPlan, j: int, c_j: FieldElement) -> HelperPayload:
    if j not in plan.helpers:
        raise ParameterError(f"node {j} is not a helper of this plan (helpers={list(plan.helpers)})")
    spec = plan.code.spec
    w = tf.mul(plan.code.v[j - 1], c_j, spec)
    coords = tf.coordinate_matrix(w, plan.download.axes)
    symbols = (plan.payload_map @ coords) % spec.p
    return HelperPayload(j, symbols.ravel())


def _check_payloads(plan: RepairPlan, payloads: Mapping[int, HelperPayload]) -> None:
    missing = [j for j in plan.helpers if j not in payloads]
    if missing:
        raise ParameterError(f"missing payloads from helpers {missing}")
    expected = plan.download.bandwidth_per_helper
    for j in plan.helpers:
        if payloads[j].symbols.size != expected:
            raise ParameterError(f"helper {j} sent {payloads[j].symbols.size} symbols, expected {expected}")


def reconstruct(plan: RepairPlan, payloads: Mapping[int, HelperPayload]) -> Dict[int, FieldElement]:
    """Recovered contents of every failed node, keyed by node index."""
    _check_payloads(plan, payloads)
    spec, p = plan.code.spec, plan.code.spec.p
    n_basis = len(plan.download.download_basis)
    blocks = {j: payloads[j].symbols.reshape(n_basis, plan.download.subfield_dim) for j in plan.helpers}

    recovered: Dict[int, FieldElement] = {}
    for pp in plan.positions:
        rows = pp.n_gamma * pp.s_i
        rhs = np.zeros((rows, spec.degree // math.prod(spec.shape[ax] for ax in pp.axes)), dtype=np.int64)
        n_fold = pp.fold_inverse.shape[0]

        # helper contributions: tr_{K/F_[i]}(γ v_j c_j), scaled by α_j^t h_i(α_j)
        for j, block in blocks.items():
            folded = ((pp.fold_coeffs.T @ block) % p).reshape(pp.n_gamma, n_fold, -1)
            coords = np.einsum("ab,gbc->gac", pp.fold_inverse, folded) % p
            for g in range(pp.n_gamma):
                x = tf.from_coordinate_matrix(coords[g], pp.fold_axes, spec, zero_axes=pp.axes)
                for t in range(pp.s_i):
                    term = tf.mul(pp.helper_factors[j][t], x, spec)
                    rhs[g * pp.s_i + t] -= tf.coordinate_matrix(term, pp.axes)[0]

        # nodes rebuilt at earlier positions
        for m, factor in pp.earlier_factors.items():
            x = tf.mul(factor, recovered[m], spec)
            for t in range(pp.s_i):
                exps = [0] * spec.n
                exps[m - 1] = t
                z = tf.mul_monomial(x, 0, exps, spec)
                traces = (pp.t_matrix.T @ pp.trace_form @ tf.coordinate_matrix(z, pp.axes)) % p
                rhs[t::pp.s_i] -= traces

        y = tf.from_coordinate_matrix((pp.gram_inverse @ (rhs % p)) % p, pp.axes, spec)
        recovered[pp.node] = tf.mul(y, pp.lam_inv, spec)
        logger.debug(f"Position {pp.pos}: node {pp.node} rebuilt")
    return recovered


def bandwidth_summary(plan: DownloadPlan) -> Dict[str, object]:
    spec = plan.spec
    bound = cutset_bound(plan.h, plan.d, spec.k, spec.degree)
    naive = naive_bandwidth(spec.k, spec.degree)
    return {
        "h": plan.h,
        "d": plan.d,
        "failed": ",".join(map(str, plan.failed)),
        "helpers": ",".join(map(str, plan.helpers)),
        "basis_size": len(plan.download_basis),
        "per_helper": plan.bandwidth_per_helper,
        "total": plan.total_bandwidth,
        "cutset": bound,
        "ratio": plan.total_bandwidth / bound,
        "naive": naive,
        "savings_vs_naive": 1 - plan.total_bandwidth / naive,
    }
