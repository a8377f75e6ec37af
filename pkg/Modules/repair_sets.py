# Modules/repair_sets.py
# ------------------------------------------------------------
# Download sets for repairing h failed nodes f_1 < ... < f_h:
# - constants s_i = d + i - k, t_i = s_1 ... s_{i-1}, s_{h+1} = D / t_{h+1}
# - W_i: the per-position building block (|W_i| = p_{f_i})
# - T_i / S_i: shifts of W_i by β-digits and α_{f_j} powers
# - (B_i, G_i): nested bases whose spans grow position by position
# Positions are 1-based; position i uses node f_i and generator α_{f_i}.
# ------------------------------------------------------------

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

from Modules.errors import ConstructionError, ParameterError
from Modules.monomial_space import extract_basis, project
from Modules.tower_field import (
    UNIVERSAL,
    Mode,
    SparseElement,
    TowerSpec,
    beta_degree,
    sparse_shift,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RepairConstants:
    h: int
    d: int
    k: int
    D: int
    s: Tuple[int, ...]  # s_1..s_{h+1}
    t: Tuple[int, ...]  # t_1..t_{h+1}

    def s_at(self, i: int) -> int:
        return self.s[i - 1]

    def t_at(self, i: int) -> int:
        return self.t[i - 1]


def _partial_products(s: Sequence[int]) -> Tuple[int, ...]:
    t = [1]
    for x in s:
        t.append(t[-1] * x)
    return tuple(t)


def is_supported(mode: Mode, h: int, d: int, k: int, n: int) -> bool:
    """Whether a tower built for `mode` repairs h erasures from d helpers at the cut-set bound."""
    if h < 1 or not k <= d <= n - h:
        return False
    if mode.kind == UNIVERSAL and h > mode.param:
        return False
    D = beta_degree(mode, n, k)
    return D % math.prod(d + i - k for i in range(1, h + 1)) == 0


def constants(mode: Mode, h: int, d: int, k: int, n: Optional[int] = None) -> RepairConstants:
    """s_1..s_{h+1} and t_1..t_{h+1}; with n given, also checks d <= n - h."""
    if h < 1:
        raise ParameterError(f"h >= 1 required, got {h}")
    if d < k:
        raise ParameterError(f"d >= k required, got d={d}, k={k}")
    if n is not None and d > n - h:
        raise ParameterError(f"d <= n - h required, got d={d}, n={n}, h={h}")
    if mode.kind == UNIVERSAL and h > mode.param:
        raise ParameterError(f"h <= r required, got h={h}, r={mode.param}")

    D = beta_degree(mode, 0, k)
    head = tuple(d + i - k for i in range(1, h + 1))
    t = _partial_products(head)
    if D % t[-1]:
        raise ParameterError(f"t_(h+1) = {t[-1]} must divide the β-degree {D} (h={h}, d={d}, k={k}, {mode})")
    consts = RepairConstants(h, d, k, D, head + (D // t[-1],), t)
    verify_exact_cover(consts)
    return consts


def verify_exact_cover(consts: RepairConstants) -> None:
    """Every 0 <= e < D is Σ u_i t_i (u_i < s_i) in exactly one way."""
    hits = [0] * consts.D
    for digits in itertools.product(*(range(x) for x in consts.s)):
        hits[sum(u * t for u, t in zip(digits, consts.t))] += 1
    if any(c != 1 for c in hits):
        raise ConstructionError(f"β-digit cover fails for s={consts.s}, t={consts.t}")


# -----------------------------
# Element construction
# -----------------------------
def _exps(spec: TowerSpec, u: int, alpha: Sequence[Tuple[int, int]]) -> Tuple[int, ...]:
    out = [u] + [0] * spec.n
    for node, e in alpha:
        out[node] += e
    return tuple(out)


def build_W(pos: int, failed: Sequence[int], consts: RepairConstants, spec: TowerSpec) -> Tuple[SparseElement, ...]:
    """W_i^(1) ∪ W_i^(2) for position `pos`, W^(1) in (u, q) order then the single W^(2) element."""
    node = failed[pos - 1]
    prime = spec.primes[node - 1]
    s_i, t_i = consts.s_at(pos), consts.t_at(pos)
    if (prime - 1) % s_i:
        raise ConstructionError(f"s_{pos} = {s_i} does not divide p_{node} - 1 = {prime - 1}")

    first = [
        SparseElement.monomial(_exps(spec, u * t_i, [(node, u + q * s_i)]))
        for u in range(s_i)
        for q in range((prime - 1) // s_i)
    ]
    second = SparseElement(
        tuple(sorted((_exps(spec, u * t_i, [(node, prime - 1)]), 1) for u in range(s_i)))
    )
    return tuple(first) + (second,)


def _shifts(
    positions: Sequence[int],
    alpha_positions: Sequence[int],
    failed: Sequence[int],
    consts: RepairConstants,
    spec: TowerSpec,
) -> Iterator[Tuple[int, ...]]:
    """β^{Σ u_j t_j} ∏ α_{f_j}^{q_j}, u_j over `positions` (may include h+1), q_j over `alpha_positions`."""
    u_ranges = [range(consts.s_at(j)) for j in positions]
    q_ranges = [range(spec.primes[failed[j - 1] - 1]) for j in alpha_positions]
    for us in itertools.product(*u_ranges):
        u = sum(x * consts.t_at(j) for x, j in zip(us, positions))
        for qs in itertools.product(*q_ranges):
            yield _exps(spec, u, [(failed[j - 1], q) for j, q in zip(alpha_positions, qs)])


def _shifted(base: Sequence[SparseElement], shifts: Iterator[Tuple[int, ...]], spec: TowerSpec) -> Tuple[SparseElement, ...]:
    out = []
    for shift in shifts:
        out.extend(sparse_shift(el, shift, spec) for el in base)
    return tuple(out)


def build_T(pos: int, failed: Sequence[int], consts: RepairConstants, spec: TowerSpec) -> Tuple[SparseElement, ...]:
    """W_i shifted by every β-digit except the i-th and by α_{f_j}^{q} for j < i."""
    h = consts.h
    others = [j for j in range(1, h + 2) if j != pos]
    return _shifted(build_W(pos, failed, consts, spec), _shifts(others, range(1, pos), failed, consts, spec), spec)


def build_S(pos: int, failed: Sequence[int], consts: RepairConstants, spec: TowerSpec) -> Tuple[SparseElement, ...]:
    """T_i shifted by α_{f_j}^{q} for j > i; equivalently W_i shifted over every other position."""
    h = consts.h
    later = list(range(pos + 1, h + 1))
    return _shifted(build_T(pos, failed, consts, spec), _shifts([], later, failed, consts, spec), spec)


def expected_S_size(pos: int, failed: Sequence[int], consts: RepairConstants, spec: TowerSpec) -> int:
    return consts.D // consts.s_at(pos) * math.prod(spec.primes[j - 1] for j in failed)


# -----------------------------
# Nested bases
# -----------------------------
def build_BG(
    upto: int, failed: Sequence[int], consts: RepairConstants, spec: TowerSpec
) -> Tuple[Tuple[SparseElement, ...], Tuple[SparseElement, ...]]:
    """
    (B_i, G_i) for i = upto. G_1 = W_1; G_i is a basis extracted from G_{i-1}
    spread over position i together with W_i spread over positions < i;
    B_i spreads G_i over the positions after i.
    """
    if not 1 <= upto <= consts.h:
        raise ParameterError(f"1 <= i <= h required, got i={upto}, h={consts.h}")
    failed = tuple(failed)
    G = build_W(1, failed, consts, spec)
    for i in range(2, upto + 1):
        g_spread = _shifted(G, _shifts([i], [i], failed, consts, spec), spec)
        w_spread = _shifted(
            build_W(i, failed, consts, spec), _shifts(range(1, i), range(1, i), failed, consts, spec), spec
        )
        sub_failed = failed[:i]
        G = extract_basis([project(g_spread, sub_failed, spec), project(w_spread, sub_failed, spec)])

    later_u = range(upto + 1, consts.h + 2)
    later_q = range(upto + 1, consts.h + 1)
    B = _shifted(G, _shifts(later_u, later_q, failed, consts, spec), spec)
    logger.debug(f"build_BG(i={upto}, failed={list(failed)}): |G|={len(G)}, |B|={len(B)}")
    return B, G


def g_support_ok(G: Sequence[SparseElement], pos: int, failed: Sequence[int], consts: RepairConstants) -> bool:
    """Every term of G_i has β-exponent < t_{i+1} and no α_{f_j} with j > i."""
    later = {failed[j - 1] for j in range(pos + 1, consts.h + 1)}
    limit = consts.t_at(pos + 1)
    for el in G:
        for exps, _ in el.terms:
            if exps[0] >= limit or any(exps[node] for node in later):
                return False
    return True


def reconstruction_set(pos: int, failed: Sequence[int], consts: RepairConstants, spec: TowerSpec) -> List[SparseElement]:
    """{γ α_{f_i}^t : γ ∈ T_i, t < s_i} in (γ, t) order."""
    node = failed[pos - 1]
    out = []
    for gamma in build_T(pos, failed, consts, spec):
        for t in range(consts.s_at(pos)):
            out.append(sparse_shift(gamma, _exps(spec, 0, [(node, t)]), spec))
    return out
