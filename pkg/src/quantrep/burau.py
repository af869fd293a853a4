"""Reduced Burau matrices at cyclotomic parameters.

Parameter conventions: A is a primitive 2p-th root of unity and the Burau
parameter is q = A^-4 (p = 5 or p even) or q = A^-8 (p odd, p >= 7).

Pure braid generators are
    A_ij = (g_{j-1} ... g_{i+1}) g_i^2 (g_{j-1} ... g_{i+1})^-1,  1 <= i < j <= n,
written with 1-based strand indices.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cyclotomic import CyclotomicNumber, make_root
from .linalg import RepMatrix

__all__ = [
    "BurauParams",
    "standard_root",
    "q_of",
    "burau_generators",
    "pure_braid_words",
    "pure_braid_generators",
    "word_image",
    "parse_word",
]


def standard_root(p: int) -> CyclotomicNumber:
    """A_p: -exp(2 pi i / 2p) for even p, -exp((p+1) pi i / p) for odd p."""
    if p < 3:
        raise ValueError("p must be >= 3")
    n = 2 * p
    # exp((p+1) pi i / p) = zeta_2p^(p+1)
    k = 1 if p % 2 == 0 else p + 1
    return -(make_root(n, 1) ** k)


def _is_primitive(A: CyclotomicNumber, n: int) -> bool:
    if not (A ** n).is_one():
        return False
    return all(not (A ** (n // ell)).is_one() for ell in _prime_factors(n))


def _prime_factors(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def q_of(p: int, A: CyclotomicNumber) -> CyclotomicNumber:
    if not _is_primitive(A, 2 * p):
        raise ValueError(f"A is not a primitive {2 * p}-th root of unity")
    if p == 5 or p % 2 == 0:
        return A ** -4
    return A ** -8


@dataclass(frozen=True)
class BurauParams:
    p: int
    A: CyclotomicNumber
    q: CyclotomicNumber
    strands: int

    @classmethod
    def make(cls, p: int, strands: int = 4, A: CyclotomicNumber | None = None, root_exponent: int | None = None):
        if A is None:
            A = standard_root(p) if root_exponent is None else make_root(2 * p, root_exponent)
        return cls(p, A, q_of(p, A), strands)

    def generators(self) -> list[RepMatrix]:
        return burau_generators(self.strands, self.q)

    def pure_generators(self) -> list[RepMatrix]:
        return pure_braid_generators(self.strands, self.q)


def burau_generators(n: int, q) -> list[RepMatrix]:
    """beta_q(g_1), ..., beta_q(g_{n-1}), each (n-1) x (n-1)."""
    if n < 3:
        raise ValueError("need at least 3 strands")
    if not isinstance(q, CyclotomicNumber):
        q = CyclotomicNumber.rational(1, q)
    m = n - 1
    one, zero = CyclotomicNumber.one(q.order), CyclotomicNumber.zero(q.order)
    gens = []
    for j in range(1, n):
        rows = [[one if a == b else zero for b in range(m)] for a in range(m)]
        r = j - 1  # row carrying the q's
        if j == 1:
            rows[0][0], rows[0][1] = -q, one
        elif j == n - 1:
            rows[r][r - 1], rows[r][r] = q, -q
        else:
            rows[r][r - 1], rows[r][r], rows[r][r + 1] = q, -q, one
        gens.append(RepMatrix(rows, q.order))
    return gens


def pure_braid_words(n: int) -> list[tuple[int, ...]]:
    """Words for A_ij as signed 1-based generator indices."""
    words = []
    for j in range(2, n + 1):
        for i in range(1, j):
            conj = tuple(range(j - 1, i, -1))
            words.append(conj + (i, i) + tuple(-g for g in reversed(conj)))
    return words


def word_image(word, gens: list[RepMatrix]) -> RepMatrix:
    inv = {}
    result = RepMatrix.identity(gens[0].dim, gens[0].order)
    for letter in word:
        if letter == 0 or abs(letter) > len(gens):
            raise ValueError(f"bad generator index {letter}")
        g = gens[abs(letter) - 1]
        if letter < 0:
            if letter not in inv:
                inv[letter] = g.inverse()
            g = inv[letter]
        result = result @ g
    return result


def pure_braid_generators(n: int, q) -> list[RepMatrix]:
    gens = burau_generators(n, q)
    return [word_image(w, gens) for w in pure_braid_words(n)]


def parse_word(text: str) -> tuple[int, ...]:
    """'1.2.-1.2' -> (1, 2, -1, 2); empty string or 'e' is the identity."""
    text = text.strip()
    if text in ("", "e", "1e"):
        return ()
    try:
        word = tuple(int(t) for t in text.split("."))
    except ValueError as exc:
        raise ValueError(f"malformed braid word {text!r}") from exc
    if any(x == 0 for x in word):
        raise ValueError("generator index 0 is not allowed")
    return word
