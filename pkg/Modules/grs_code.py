# Modules/grs_code.py
# ------------------------------------------------------------
# Reed–Solomon code over K with evaluation points α_1..α_n:
# - encode: coefficient-form message -> evaluations (Horner)
# - dual multipliers v_i = ∏_{j≠i} (ω_i - ω_j)^{-1}
# - annihilator polynomials and dual codewords (v_j ω_j^t h(ω_j))_j
# - decode_from_k: Lagrange interpolation from any k coordinates
# Polynomials over K are lists of FieldElements, constant term first.
# ------------------------------------------------------------

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from Modules.errors import ParameterError
from Modules import tower_field as tf
from Modules.tower_field import FieldElement, TowerSpec

logger = logging.getLogger(__name__)

KPoly = List[FieldElement]


@dataclass(frozen=True)
class CodeSpec:
    spec: TowerSpec
    n: int
    k: int
    omega: Tuple[FieldElement, ...]
    v: Tuple[FieldElement, ...]


def evaluation_points(spec: TowerSpec) -> Tuple[FieldElement, ...]:
    return tuple(tf.monomial(0, [1 if j == i else 0 for j in range(spec.n)], spec) for i in range(spec.n))


def _check_distinct(points: Sequence[FieldElement]) -> None:
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            if np.array_equal(points[i], points[j]):
                raise ParameterError(f"evaluation points {i + 1} and {j + 1} coincide")


def dual_multipliers(omega: Sequence[FieldElement], spec: TowerSpec) -> Tuple[FieldElement, ...]:
    _check_distinct(omega)
    out = []
    for i, wi in enumerate(omega):
        prod = tf.one(spec)
        for j, wj in enumerate(omega):
            if j != i:
                prod = tf.mul(prod, tf.sub(wi, wj, spec), spec)
        out.append(tf.inv(prod, spec))
    return tuple(out)


def make_code(spec: TowerSpec) -> CodeSpec:
    omega = evaluation_points(spec)
    code = CodeSpec(spec, spec.n, spec.k, omega, dual_multipliers(omega, spec))
    logger.info(f"RS code ready: n={spec.n}, k={spec.k}, l={spec.degree}")
    return code


def evaluate(poly: Sequence[FieldElement], x: FieldElement, spec: TowerSpec) -> FieldElement:
    acc = tf.zero(spec)
    for coeff in reversed(poly):
        acc = tf.add(tf.mul(acc, x, spec), coeff, spec)
    return acc


def encode(message: Sequence[FieldElement], code: CodeSpec) -> List[FieldElement]:
    if len(message) != code.k:
        raise ParameterError(f"message must have k={code.k} symbols, got {len(message)}")
    return [evaluate(message, w, code.spec) for w in code.omega]


def random_message(code: CodeSpec, rng: np.random.Generator) -> List[FieldElement]:
    return [tf.random_element(code.spec, rng) for _ in range(code.k)]


def poly_mul_linear(poly: Sequence[FieldElement], root: FieldElement, spec: TowerSpec) -> KPoly:
    """poly · (x - root)."""
    out = [tf.zero(spec) for _ in range(len(poly) + 1)]
    for e, c in enumerate(poly):
        out[e + 1] = tf.add(out[e + 1], c, spec)
        out[e] = tf.sub(out[e], tf.mul(c, root, spec), spec)
    return out


def annihilator(points: Sequence[FieldElement], spec: TowerSpec) -> KPoly:
    """Monic ∏ (x - ω) over the given points."""
    poly: KPoly = [tf.one(spec)]
    for w in points:
        poly = poly_mul_linear(poly, w, spec)
    return poly


def dual_codeword(t: int, h_poly: Sequence[FieldElement], code: CodeSpec) -> List[FieldElement]:
    """(v_j ω_j^t h(ω_j))_j; requires t + deg h <= n - k - 1."""
    deg = len(h_poly) - 1
    if t < 0 or t + deg > code.n - code.k - 1:
        raise ParameterError(f"t + deg h <= n-k-1 required, got t={t}, deg h={deg}, n-k={code.n - code.k}")
    spec = code.spec
    out = []
    for w, v in zip(code.omega, code.v):
        out.append(tf.mul(tf.mul(v, tf.power(w, t, spec), spec), evaluate(h_poly, w, spec), spec))
    return out


def inner_product(x: Sequence[FieldElement], y: Sequence[FieldElement], spec: TowerSpec) -> FieldElement:
    acc = tf.zero(spec)
    for a, b in zip(x, y):
        acc = tf.add(acc, tf.mul(a, b, spec), spec)
    return acc


def decode_from_k(positions: Sequence[int], values: Sequence[FieldElement], code: CodeSpec) -> List[FieldElement]:
    """Message (coefficient form) from k coordinates, positions 1-based."""
    if len(positions) != code.k or len(values) != code.k:
        raise ParameterError(f"need exactly k={code.k} positions and values, got {len(positions)}/{len(values)}")
    if len(set(positions)) != len(positions):
        raise ParameterError(f"positions must be distinct, got {list(positions)}")
    spec = code.spec
    pts = [code.omega[i - 1] for i in positions]
    message = [tf.zero(spec) for _ in range(code.k)]
    for i, (xi, yi) in enumerate(zip(pts, values)):
        others = [xj for j, xj in enumerate(pts) if j != i]
        basis = annihilator(others, spec)
        denom = evaluate(basis, xi, spec)
        weight = tf.mul(yi, tf.inv(denom, spec), spec)
        for e, c in enumerate(basis):
            message[e] = tf.add(message[e], tf.mul(weight, c, spec), spec)
    return message
