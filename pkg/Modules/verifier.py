# Modules/verifier.py
# ------------------------------------------------------------
# Machine checks of the dimension and duality statements behind the
# repair scheme. Each check compares a closed-form expectation with a
# value computed independently (ranks in the reduced monomial space,
# or exact arithmetic in K) and records a CheckReport.
# ------------------------------------------------------------

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from Modules import tower_field as tf
from Modules.grs_code import (
    CodeSpec,
    annihilator,
    dual_codeword,
    encode,
    inner_product,
    random_message,
)
from Modules.monomial_space import (
    contains,
    project,
    rank,
    set_product,
    span_intersection_dim,
    span_sum_dim,
)
from Modules.repair_sets import (
    build_BG,
    build_S,
    build_T,
    build_W,
    constants,
    g_support_ok,
    is_supported,
    reconstruction_set,
)
from Modules.tower_field import TWO_ERASURE, UNIVERSAL, SubfieldMask, TowerSpec

logger = logging.getLogger(__name__)

CHECK_NAMES = ("intersection", "growth", "basis", "nested", "duality")
# short names accepted on the command line
CHECK_ALIASES = {"ints": "intersection", "ish": "growth", "props": "basis", "claim1": "nested"}
DEFAULT_DUALITY_TRIALS = 100
TRACED_SAMPLES = 3


@dataclass
class CheckReport:
    name: str
    params: Dict[str, object]
    expected: object
    computed: object
    passed: bool = field(init=False)
    detail: str = ""

    def __post_init__(self):
        self.passed = self.expected == self.computed

    def as_row(self) -> Dict[str, object]:
        row = asdict(self)
        row["params"] = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return row


def _params(spec: TowerSpec, failed: Sequence[int], d: int, **extra) -> Dict[str, object]:
    out = {"mode": str(spec.mode), "n": spec.n, "k": spec.k, "failed": list(failed), "d": d}
    out.update(extra)
    return out


def check_span_intersection(spec: TowerSpec, failed: Sequence[int]) -> CheckReport:
    """Intersection of the two download spans on the two-erasure code has dimension p_{i1} p_{i2}."""
    if spec.mode.kind != TWO_ERASURE or len(failed) != 2:
        raise ValueError("intersection check needs a two-erasure tower and two failed nodes")
    failed = tuple(sorted(failed))
    d = spec.mode.param
    consts = constants(spec.mode, 2, d, spec.k, spec.n)
    S1, S2 = (project(build_S(i, failed, consts, spec), failed, spec) for i in (1, 2))
    computed = span_intersection_dim(S1, S2)
    expected = math.prod(spec.primes[j - 1] for j in failed)

    witness = project(set_product(build_W(1, failed, consts, spec), build_W(2, failed, consts, spec), spec), failed, spec)
    witness_rank = rank(witness)
    witness_ok = witness_rank == witness.n_cols == expected and contains(S1, witness) and contains(S2, witness)
    report = CheckReport(
        "intersection",
        _params(spec, failed, d),
        (expected, True),
        (computed, witness_ok),
        detail=f"dim(S1 ∩ S2)={computed}, witness rank={witness_rank}",
    )
    logger.info(f"intersection {list(failed)}: {computed} vs {expected} -> {'pass' if report.passed else 'FAIL'}")
    return report


def check_span_growth(spec: TowerSpec, failed: Sequence[int], d: int, upto_i: int) -> CheckReport:
    """dim(S_1 + ... + S_i) = i/(d+i-k) · D · ∏_{j ∈ failed} p_j."""
    failed = tuple(sorted(failed))
    consts = constants(spec.mode, len(failed), d, spec.k, spec.n)
    mats = [project(build_S(i, failed, consts, spec), failed, spec) for i in range(1, upto_i + 1)]
    computed = span_sum_dim(mats)
    expected = Fraction(upto_i, d + upto_i - spec.k) * spec.D * math.prod(spec.primes[j - 1] for j in failed)
    report = CheckReport("growth", _params(spec, failed, d, i=upto_i), int(expected) if expected.denominator == 1 else expected, computed)
    logger.info(f"growth {list(failed)} i={upto_i}: {computed} vs {expected}")
    return report


def check_reconstruction_basis(spec: TowerSpec, failed: Sequence[int], d: int, pos: int) -> CheckReport:
    """{γ α_i^t : γ ∈ T_i, t < s_i} is a basis of K over F_[i]."""
    failed = tuple(sorted(failed))
    consts = constants(spec.mode, len(failed), d, spec.k, spec.n)
    full = spec.D * math.prod(spec.primes[j - 1] for j in failed[:pos])
    size = consts.s_at(pos) * len(build_T(pos, failed, consts, spec))
    recon = reconstruction_set(pos, failed, consts, spec)
    computed = rank(project(recon, failed[:pos], spec))
    degree = tf.extension_degree(SubfieldMask.repair_field(spec.n, failed[:pos]), spec)
    return CheckReport(
        "basis",
        _params(spec, failed, d, i=pos),
        (full, full, full),
        (computed, size, degree),
        detail="rank, s_i|T_i|, [K:F_[i]]",
    )


def check_nested_bases(spec: TowerSpec, failed: Sequence[int], d: int) -> List[CheckReport]:
    """Per position: B_i independent, spans S_1..S_i, |B_i| = dim of that span, G_i support and size bound."""
    failed = tuple(sorted(failed))
    h = len(failed)
    consts = constants(spec.mode, h, d, spec.k, spec.n)
    S_mats = [project(build_S(i, failed, consts, spec), failed, spec) for i in range(1, h + 1)]
    reports = []
    for i in range(1, h + 1):
        B, G = build_BG(i, failed, consts, spec)
        B_mat = project(B, failed, spec)
        independent = rank(B_mat) == len(B)
        spans = all(contains(B_mat, S_mats[j]) for j in range(i))
        size_ok = len(B) == span_sum_dim(S_mats[:i])
        g_bound = Fraction(i, d + i - spec.k) * math.prod(
            consts.s_at(j) * spec.primes[failed[j - 1] - 1] for j in range(1, i + 1)
        )
        g_ok = g_support_ok(G, i, failed, consts) and len(G) <= g_bound
        reports.append(
            CheckReport(
                "nested",
                _params(spec, failed, d, i=i),
                (True, True, True, True),
                (independent, spans, size_ok, g_ok),
                detail=f"|B_{i}|={len(B)}, |G_{i}|={len(G)}",
            )
        )
    return reports


def check_duality(
    code: CodeSpec,
    trials: int,
    seed: int,
    failed_sets: Optional[Sequence[Sequence[int]]] = None,
) -> CheckReport:
    """
    Every dual codeword (v_j ω_j^t h(ω_j)) with t + deg h <= n-k-1 is orthogonal
    to random codewords, and so is its trace against download-set elements.
    """
    spec = code.spec
    rng = np.random.Generator(np.random.PCG64(seed))
    slack = code.n - code.k - 1
    duals = []
    for size in range(0, slack + 1):
        for pts in itertools.combinations(range(code.n), size):
            h_poly = annihilator([code.omega[j] for j in pts], spec)
            for t in range(slack - size + 1):
                duals.append(dual_codeword(t, h_poly, code))

    failures = 0
    zero = tf.zero(spec)
    for _ in range(trials):
        c = encode(random_message(code, rng), code)
        for dual in duals:
            if not np.array_equal(inner_product(dual, c, spec), zero):
                failures += 1

    plans = _duality_plans(spec, failed_sets)
    traced, positions = 0, 0
    for failed, d in plans:
        for pos in range(1, len(failed) + 1):
            traced += _traced_identity_failures(code, rng, failed, d, pos)
            positions += 1
    return CheckReport(
        "duality",
        {"n": code.n, "k": code.k, "trials": trials, "dual_codewords": len(duals),
         "plans": [list(f) for f, _ in plans], "positions": positions},
        (0, 0),
        (failures, traced),
        detail="plain inner-product failures, traced-identity failures",
    )


def _duality_plans(spec: TowerSpec, failed_sets: Optional[Sequence[Sequence[int]]]) -> List[Tuple[Tuple[int, ...], int]]:
    """(failed, largest supported d) per requested failed set; by default the first set of the largest h."""
    best: Dict[Tuple[int, ...], int] = {}
    for failed, d in legal_instances(spec, failed_sets):
        best[failed] = max(d, best.get(failed, d))
    if failed_sets is None and best:
        h_max = max(len(f) for f in best)
        first = next(f for f in best if len(f) == h_max)
        return [(first, best[first])]
    return sorted(best.items())


def _traced_identity_failures(code: CodeSpec, rng: np.random.Generator, failed: Sequence[int], d: int, pos: int) -> int:
    """Σ_j tr_{K/F_[i]}(γ v_j ω_j^t h_i(ω_j) c_j) = 0 for sampled γ ∈ S_i, t < s_i."""
    spec = code.spec
    n, k = code.n, code.k
    failed = tuple(sorted(failed))
    helpers = [j for j in range(1, n + 1) if j not in failed][:d]
    consts = constants(spec.mode, len(failed), d, k, n)
    S_i = build_S(pos, failed, consts, spec)
    mask = SubfieldMask.repair_field(n, failed[:pos])
    # h_i vanishes on every node that is neither a helper nor repaired up to position i
    roots = [j for j in range(1, n + 1) if j not in helpers and j not in failed[:pos]]
    h_poly = annihilator([code.omega[j - 1] for j in roots], spec)

    failures = 0
    for _ in range(TRACED_SAMPLES):
        c = encode(random_message(code, rng), code)
        gamma = tf.densify(S_i[int(rng.integers(len(S_i)))], spec)
        for t in range(consts.s_at(pos)):
            dual = dual_codeword(t, h_poly, code)
            total = tf.zero(spec)
            for xj, cj in zip(dual, c):
                total = tf.add(total, tf.trace_to(tf.mul(gamma, tf.mul(xj, cj, spec), spec), mask, spec), spec)
            failures += int(np.any(total))
    return failures


# -----------------------------
# Suite
# -----------------------------
def legal_instances(spec: TowerSpec, failed_sets: Optional[Sequence[Sequence[int]]] = None):
    """(failed, d) pairs a tower supports, every failed subset unless given explicitly."""
    n, k = spec.n, spec.k
    for h in range(1, n - k + 1):
        subsets = [tuple(sorted(f)) for f in failed_sets if len(f) == h] if failed_sets else itertools.combinations(range(1, n + 1), h)
        for failed in subsets:
            for d in range(k, n - h + 1):
                if is_supported(spec.mode, h, d, k, n):
                    yield tuple(failed), d


def resolve_checks(which: Sequence[str]) -> Tuple[str, ...]:
    """Canonical check names, in CHECK_NAMES order; "all" and the short aliases expand."""
    if isinstance(which, str):
        which = (which,)
    names = set()
    for name in which:
        if name == "all":
            names.update(CHECK_NAMES)
        elif name in CHECK_ALIASES:
            names.add(CHECK_ALIASES[name])
        elif name in CHECK_NAMES:
            names.add(name)
        else:
            raise ValueError(f"unknown check: {name!r}")
    return tuple(n for n in CHECK_NAMES if n in names)


def run_suite(
    spec: TowerSpec,
    which: Sequence[str] = CHECK_NAMES,
    code: Optional[CodeSpec] = None,
    trials: int = DEFAULT_DUALITY_TRIALS,
    seed: int = 2017,
    failed_sets: Optional[Sequence[Sequence[int]]] = None,
) -> List[CheckReport]:
    which = resolve_checks(which)
    reports: List[CheckReport] = []
    instances = list(legal_instances(spec, failed_sets))

    if "intersection" in which and spec.mode.kind == TWO_ERASURE:
        for failed, d in instances:
            if len(failed) == 2 and d == spec.mode.param:
                reports.append(check_span_intersection(spec, failed))
    if "growth" in which and spec.mode.kind == UNIVERSAL:
        for failed, d in instances:
            for i in range(1, len(failed) + 1):
                reports.append(check_span_growth(spec, failed, d, i))
    if "basis" in which:
        for failed, d in instances:
            for i in range(1, len(failed) + 1):
                reports.append(check_reconstruction_basis(spec, failed, d, i))
    if "nested" in which and spec.mode.kind == UNIVERSAL:
        for failed, d in instances:
            reports.extend(check_nested_bases(spec, failed, d))
    if "duality" in which and code is not None:
        reports.append(check_duality(code, trials, seed, failed_sets))

    passed = sum(r.passed for r in reports)
    logger.info(f"Verification suite: {passed}/{len(reports)} checks passed")
    return reports


def reports_frame(reports: Sequence[CheckReport]) -> pd.DataFrame:
    return pd.DataFrame([r.as_row() for r in reports], columns=["name", "params", "expected", "computed", "passed", "detail"])
