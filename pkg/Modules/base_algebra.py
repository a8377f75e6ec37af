# Modules/base_algebra.py
# ------------------------------------------------------------
# Prime-field building blocks:
# - PrimeFieldPoly (coefficients mod p, constant term first)
# - Dirichlet prime selection (q ≡ 1 mod m), sieve grows on demand
# - irreducibility via galois + deterministic irreducible search
# - Newton power sums (root power sums, i.e. per-generator traces)
# ------------------------------------------------------------

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Sequence, Tuple, Type

import galois
import numpy as np

from Modules.errors import ParameterError

logger = logging.getLogger(__name__)

# -----------------------------
# CONFIG
# -----------------------------
SIEVE_SEGMENT = 4096


# -----------------------------
# Integers
# -----------------------------
def select_primes(count: int, modulus: int) -> List[int]:
    """
    The `count` smallest primes q with q ≡ 1 (mod modulus), ascending.

    Scans the progression 1, 1+m, 1+2m, ... in segments of SIEVE_SEGMENT
    terms and keeps going until enough primes are found.
    """
    if modulus < 1:
        raise ParameterError(f"modulus >= 1 required, got {modulus}")
    if count < 0:
        raise ParameterError(f"count >= 0 required, got {count}")

    found: List[int] = []
    start = 1
    while len(found) < count:
        segment = range(start, start + SIEVE_SEGMENT * modulus, modulus)
        for q in segment:
            if galois.is_prime(q):
                found.append(q)
                if len(found) == count:
                    break
        start += SIEVE_SEGMENT * modulus
    logger.debug(f"select_primes({count}, {modulus}) -> {found}")
    return found


# -----------------------------
# Polynomials over F_p
# -----------------------------
@lru_cache(maxsize=None)
def prime_field(p: int) -> Type[galois.FieldArray]:
    """galois.GF(p), built once per characteristic."""
    return galois.GF(p)


@dataclass(frozen=True)
class PrimeFieldPoly:
    """Polynomial over F_p; coeffs constant term first, no trailing zeros."""

    p: int
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        trimmed = [int(c) % self.p for c in self.coeffs]
        while trimmed and trimmed[-1] == 0:
            trimmed.pop()
        object.__setattr__(self, "coeffs", tuple(trimmed))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def to_galois(self) -> galois.Poly:
        return galois.Poly(list(self.coeffs) or [0], field=prime_field(self.p), order="asc")


    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        for e in range(self.degree, -1, -1):
            c = self.coeffs[e]
            if c == 0:
                continue
            mono = "1" if e == 0 else ("x" if e == 1 else f"x^{e}")
            terms.append(mono if c == 1 and e > 0 else (f"{c}" if e == 0 else f"{c}*{mono}"))
        return " + ".join(terms)


def poly(p: int, coeffs: Sequence[int]) -> PrimeFieldPoly:
    return PrimeFieldPoly(p, tuple(coeffs))


def is_irreducible(f: PrimeFieldPoly) -> bool:
    """Rabin's test, as run by galois.Poly.is_irreducible."""
    if f.degree < 1:
        raise ParameterError("irreducibility test needs degree >= 1")
    if not f.is_monic:
        raise ParameterError(f"irreducibility test needs a monic polynomial, got {f}")
    return bool(f.to_galois().is_irreducible())



@lru_cache(maxsize=None)
def find_irreducible(p: int, degree: int) -> PrimeFieldPoly:
    """
    Smallest monic irreducible of the given degree, where candidates are
    ordered by their non-leading coefficients read as a base-p integer
    (constant term least significant).
    """
    if degree < 1:
        raise ParameterError(f"degree >= 1 required, got {degree}")
    for code in range(p ** degree):
        low = []
        for _ in range(degree):
            code, digit = divmod(code, p)
            low.append(digit)
        candidate = poly(p, low + [1])
        if is_irreducible(candidate):
            logger.debug(f"find_irreducible({p}, {degree}) -> {candidate}")
            return candidate
    raise AssertionError(f"no irreducible polynomial of degree {degree} over F_{p}")


def power_sums(f: PrimeFieldPoly, upto: int) -> List[int]:
    """
    S_0..S_upto, S_e = sum of e-th powers of the roots of f, via Newton's
    identities. For monic f = x^d + a_{d-1}x^{d-1} + ... + a_0:

        S_m = -(a_{d-1} S_{m-1} + ... + a_{d-m+1} S_1) - m a_{d-m}   (m <= d)
        S_m = -(a_{d-1} S_{m-1} + ... + a_0 S_{m-d})                 (m > d)
    """
    if not is_irreducible(f):
        raise ParameterError(f"power sums are defined here for irreducible input only, got {f}")
    p, d, a = f.p, f.degree, f.coeffs
    sums = [d % p]
    for m in range(1, upto + 1):
        acc = 0
        for i in range(1, min(m, d + 1)):
            acc += a[d - i] * sums[m - i]
        if m <= d:
            acc += m * a[d - m]
        sums.append((-acc) % p)
    return sums


def reduction_table(f: PrimeFieldPoly, upto: int) -> np.ndarray:
    """Row e holds the coordinates of x^e mod f, for e < upto (shape upto × deg f)."""
    d = f.degree
    table = np.zeros((upto, d), dtype=np.int64)
    cur = np.zeros(d, dtype=np.int64)
    if d == 0:
        return table
    cur[0] = 1
    tail = np.array([(-c) % f.p for c in f.coeffs[:d]], dtype=np.int64)
    for e in range(upto):
        table[e] = cur
        top = cur[d - 1]
        cur = np.roll(cur, 1)
        cur[0] = 0
        cur = (cur + top * tail) % f.p
    return table


def companion_power(f: PrimeFieldPoly, e: int) -> np.ndarray:
    """Matrix of multiplication by x^e on F_p[x]/(f) in the power basis (column c = x^(c+e))."""
    d = f.degree
    table = reduction_table(f, d + e)
    return table[e: e + d].T.copy()


def hankel_trace_form(f: PrimeFieldPoly) -> np.ndarray:
    """tr(x^(a+b)) for a, b < deg f, i.e. the trace form of the power basis."""
    d = f.degree
    sums = np.array(power_sums(f, max(0, 2 * d - 2)), dtype=np.int64)
    idx = np.add.outer(np.arange(d), np.arange(d))
    return sums[idx]
