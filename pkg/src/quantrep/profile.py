"""Signatures of an invariant Hermitian form across complex embeddings.

The entries of a Burau image at q of order m generate Q(zeta_m); its complex
embeddings come in conjugate pairs, one representative per pair.  For each
representative the embedded form is a Hermitian matrix in U(a, b) and the
factor is compact exactly when the form is definite.

Signs are decided rigorously: every root of the characteristic polynomial of
a Hermitian matrix is real, so Descartes' rule of signs counts the positive
roots exactly.  The coefficients are exact cyclotomic numbers; each sign is
read off a numeric enclosure whose precision is doubled until the enclosure
excludes zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath

from .burau import BurauParams
from .cyclotomic import CyclotomicNumber, GaloisEmbedding, embed_numeric
from .errors import PrecisionExhausted
from .linalg import HermitianForm, RepMatrix, invariant_hermitian_form

__all__ = [
    "FactorDescriptor",
    "Profile",
    "embedding_classes",
    "embedding_classes_of_order",
    "characteristic_polynomial",
    "certified_sign",
    "signature_of",
    "group_profile",
]

MAX_PRECISION = 4000


@dataclass(frozen=True)
class FactorDescriptor:
    embedding: GaloisEmbedding
    signature: tuple[int, int]

    @property
    def compact(self) -> bool:
        return 0 in self.signature


@dataclass(frozen=True)
class Profile:
    p: int
    factors: tuple[FactorDescriptor, ...]

    @property
    def noncompact_count(self) -> int:
        return sum(not f.compact for f in self.factors)


def embedding_classes_of_order(n: int) -> list[GaloisEmbedding]:
    """One embedding of Q(zeta_n) per complex-conjugate pair (exponents k < n/2)."""
    if n < 3:
        raise ValueError("Q(zeta_n) is real for n <= 2")
    return [GaloisEmbedding(n, k) for k in range(1, (n + 1) // 2) if math.gcd(k, n) == 1]


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, math.isqrt(p) + 1))


def embedding_classes(p: int) -> list[GaloisEmbedding]:
    """Embedding classes for the Burau parameter at level p (q has order p)."""
    if not _is_prime(p) or not (p == 5 or (p >= 7 and p % 4 == 3)):
        raise ValueError(f"unsupported p={p}: need p = 5 or a prime p >= 7 with p = 3 mod 4")
    return embedding_classes_of_order(p)


def characteristic_polynomial(H: RepMatrix) -> list[CyclotomicNumber]:
    """Coefficients c_0..c_d of det(x I - H), by Faddeev-LeVerrier."""
    d = H.dim
    order = H.order
    I = RepMatrix.identity(d, order)
    coeffs = [CyclotomicNumber.zero(order)] * (d + 1)
    coeffs[d] = CyclotomicNumber.one(order)
    M = RepMatrix.identity(d, order).scale(CyclotomicNumber.zero(order))
    for k in range(1, d + 1):
        M = H @ M + I.scale(coeffs[d - k + 1])
        tr = sum((H @ M)[i, i] for i in range(d))
        coeffs[d - k] = -tr / k
    return coeffs


def certified_sign(x: CyclotomicNumber, sigma: GaloisEmbedding, precision: int = 30,
                   max_precision: int = MAX_PRECISION) -> int:
    """Sign of the real number sigma(x); x must be real at sigma."""
    if x.is_zero():
        return 0
    prec = precision
    while prec <= max_precision:
        box = embed_numeric(x, sigma, prec)
        with mpmath.workdps(prec + 10):
            if abs(box.mid.imag) > box.rad + mpmath.mpf(10) ** (-prec // 2):
                raise ValueError("value is not real at this embedding")
            if abs(box.mid.real) > box.rad:
                return 1 if box.mid.real > 0 else -1
        prec *= 2
    raise PrecisionExhausted(f"sign undecided at {max_precision} digits")


def _sign_changes(signs: list[int]) -> int:
    s = [x for x in signs if x]
    return sum(1 for a, b in zip(s, s[1:]) if a != b)


def signature_of(H: RepMatrix, sigma: GaloisEmbedding, precision: int = 30,
                 max_precision: int = MAX_PRECISION) -> tuple[int, int]:
    if isinstance(H, HermitianForm) and not H.nondegenerate:
        raise ValueError("form is degenerate")
    coeffs = characteristic_polynomial(H)
    if coeffs[0].is_zero():
        raise ValueError("form is degenerate")
    signs = [certified_sign(c, sigma, precision, max_precision) for c in coeffs]
    positive = _sign_changes(signs)
    negative = _sign_changes([s if k % 2 == 0 else -s for k, s in enumerate(signs)])
    return positive, negative


def group_profile(p: int, representation: str = "burau-pb4", A: CyclotomicNumber | None = None,
                  root_exponent: int | None = None, precision: int = 30) -> Profile:
    """One factor per embedding class of the field of the Burau parameter."""
    if representation not in ("burau-pb4", "burau-b4"):
        raise ValueError(f"unknown representation tag {representation!r}")
    classes = embedding_classes(p)
    params = BurauParams.make(p, 4, A=A, root_exponent=root_exponent)
    # the pure braid group has finite index, so it preserves the same forms
    H, _ = invariant_hermitian_form(params.generators())
    factors = tuple(FactorDescriptor(s, signature_of(H, s, precision)) for s in classes)
    return Profile(p, factors)
