"""Matrices over cyclotomic fields and the exact certificates built on them.

* invariant Hermitian forms (fixed points of H -> g^* H g),
* Burnside span of the words in a generating set,
* a terminating finite-order test.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import reduce as _fold

from sympy import factorint, nextprime

from .cyclotomic import (
    CyclotomicNumber,
    ResidueRing,
    conductor,
    euler_phi,
    residue_contexts,
)
from .errors import NoInvariantForm

__all__ = [
    "RepMatrix",
    "HermitianForm",
    "invariant_hermitian_form",
    "burnside_span",
    "finite_order_test",
    "rational_nullspace",
    "order_bound",
]


def _lcm(a, b):
    return a * b // math.gcd(a, b)


class RepMatrix:
    """Square matrix with CyclotomicNumber entries over one common field."""

    __slots__ = ("rows", "dim", "order")

    def __init__(self, rows, order: int | None = None):
        rows = [list(r) for r in rows]
        dim = len(rows)
        if any(len(r) != dim for r in rows):
            raise ValueError("matrix must be square")
        if order is None:
            order = 1
            for r in rows:
                for x in r:
                    if isinstance(x, CyclotomicNumber):
                        order = _lcm(order, x.order)
        order = conductor(order)
        self.rows = tuple(tuple(_as_cyc(x, order) for x in r) for r in rows)
        self.dim = dim
        self.order = order

    @classmethod
    def identity(cls, dim: int, order: int = 1) -> RepMatrix:
        one, zero = CyclotomicNumber.one(order), CyclotomicNumber.zero(order)
        return cls([[one if i == j else zero for j in range(dim)] for i in range(dim)], order)

    @classmethod
    def diagonal(cls, entries) -> RepMatrix:
        entries = list(entries)
        order = _fold(_lcm, (x.order for x in entries if isinstance(x, CyclotomicNumber)), 1)
        zero = CyclotomicNumber.zero(order)
        d = len(entries)
        return cls([[entries[i] if i == j else zero for j in range(d)] for i in range(d)], order)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __iter__(self):
        return iter(self.rows)

    def __repr__(self):
        return f"RepMatrix(dim={self.dim}, order={self.order})"

    def __eq__(self, other):
        if not isinstance(other, RepMatrix) or other.dim != self.dim:
            return NotImplemented
        return all(a == b for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb))

    def __hash__(self):
        return hash(tuple(hash(x) for r in self.rows for x in r))

    def __matmul__(self, other: RepMatrix) -> RepMatrix:
        d = self.dim
        cols = list(zip(*other.rows))
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = None
                for a, b in zip(r, c):
                    if a.is_zero() or b.is_zero():
                        continue
                    t = a * b
                    acc = t if acc is None else acc + t
                row.append(acc if acc is not None else CyclotomicNumber.zero(self.order))
            out.append(row)
        return RepMatrix(out, _lcm(self.order, other.order))

    def __add__(self, other: RepMatrix) -> RepMatrix:
        return RepMatrix([[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)])

    def __sub__(self, other: RepMatrix) -> RepMatrix:
        return RepMatrix([[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)])

    def scale(self, c) -> RepMatrix:
        return RepMatrix([[a * c for a in r] for r in self.rows])

    def __pow__(self, e: int) -> RepMatrix:
        if e < 0:
            return self.inverse() ** (-e)
        result = RepMatrix.identity(self.dim, self.order)
        base = self
        while e:
            if e & 1:
                result = result @ base
            e >>= 1
            if e:
                base = base @ base
        return result

    def map(self, f) -> RepMatrix:
        return RepMatrix([[f(a) for a in r] for r in self.rows])

    def conj(self) -> RepMatrix:
        return self.map(lambda a: a.conj())

    def transpose(self) -> RepMatrix:
        return RepMatrix([list(c) for c in zip(*self.rows)], self.order)

    def dagger(self) -> RepMatrix:
        return self.conj().transpose()

    def galois(self, k: int) -> RepMatrix:
        return self.map(lambda a: a.galois(k))

    def is_identity(self) -> bool:
        return all(
            (a.is_one() if i == j else a.is_zero())
            for i, r in enumerate(self.rows)
            for j, a in enumerate(r)
        )

    def is_scalar(self) -> bool:
        c = self.rows[0][0]
        return all((a == c if i == j else a.is_zero()) for i, r in enumerate(self.rows) for j, a in enumerate(r))

    def det(self) -> CyclotomicNumber:
        return _det(self.rows, self.order)

    def inverse(self) -> RepMatrix:
        d = self.dim
        aug = [list(r) + [CyclotomicNumber.one(self.order) if i == j else CyclotomicNumber.zero(self.order) for j in range(d)]
               for i, r in enumerate(self.rows)]
        for c in range(d):
            p = next((i for i in range(c, d) if not aug[i][c].is_zero()), None)
            if p is None:
                raise ZeroDivisionError("singular matrix")
            aug[c], aug[p] = aug[p], aug[c]
            inv = aug[c][c].inverse()
            aug[c] = [x * inv for x in aug[c]]
            for i in range(d):
                if i != c and not aug[i][c].is_zero():
                    f = aug[i][c]
                    aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
        return RepMatrix([r[d:] for r in aug], self.order)

    def flat(self) -> list[CyclotomicNumber]:
        return [a for r in self.rows for a in r]

    def to_numpy(self, k: int = 1):
        import numpy as np

        return np.array([[a.to_complex(k) if a.order > 1 else complex(a.to_complex()) for a in r] for r in self.rows])


def _as_cyc(x, order):
    if isinstance(x, CyclotomicNumber):
        return x.lift(order) if x.order != order else x
    return CyclotomicNumber.rational(order, Fraction(x))


def _det(rows, order):
    d = len(rows)
    if d == 1:
        return rows[0][0]
    if d == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = CyclotomicNumber.zero(order)
    for j in range(d):
        if rows[0][j].is_zero():
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = rows[0][j] * _det(minor, order)
        total = total + term if j % 2 == 0 else total - term
    return total


class HermitianForm(RepMatrix):
    """A matrix with H[j][i] == conj(H[i][j]) exactly."""

    __slots__ = ("nondegenerate",)

    def __init__(self, rows, order: int | None = None):
        super().__init__(rows, order)
        for i in range(self.dim):
            for j in range(i, self.dim):
                if self.rows[j][i] != self.rows[i][j].conj():
                    raise ValueError("matrix is not Hermitian")
        self.nondegenerate = not self.det().is_zero()

    def is_invariant_under(self, g: RepMatrix) -> bool:
        return g.dagger() @ self @ g == self


# rational linear algebra ------------------------------------------------------


def rational_nullspace(rows, ncols: int) -> list[list[Fraction]]:
    """Basis of {x in Q^ncols : rows . x = 0}.

    Fraction-free elimination on integer rows; every row is kept primitive
    (content divided out) so entry sizes stay bounded by the pivots.
    """
    mat = []
    for r in rows:
        r = [Fraction(x) for x in r]
        den = _fold(_lcm, (x.denominator for x in r), 1)
        ir = [int(x * den) for x in r]
        if any(ir):
            mat.append(_primitive(ir))
    pivots = []
    rank = 0
    for c in range(ncols):
        p = next((i for i in range(rank, len(mat)) if mat[i][c]), None)
        if p is None:
            continue
        mat[rank], mat[p] = mat[p], mat[rank]
        pr = mat[rank]
        pv = pr[c]
        for i in range(len(mat)):
            if i != rank and mat[i][c]:
                f = mat[i][c]
                g = math.gcd(pv, f)
                a, b = pv // g, f // g
                mat[i] = _primitive([a * x - b * y for x, y in zip(mat[i], pr)])
        pivots.append(c)
        rank += 1
        mat = [r for r in mat[:rank]] + [r for r in mat[rank:] if any(r)]
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = Fraction(-mat[i][f], mat[i][c])
        basis.append(v)
    return basis


def _primitive(r):
    g = _fold(math.gcd, r, 0)
    if g > 1:
        r = [x // g for x in r]
    return r


# invariant Hermitian forms ----------------------------------------------------


def invariant_hermitian_form(generators: list[RepMatrix]) -> tuple[HermitianForm, int]:
    """A Hermitian H with g^* H g = H for every generator.

    Returns (H, dimension of the solution space over the real subfield).  H is
    flagged nondegenerate when some small integer combination of the basis
    is.  Raises NoInvariantForm when the solution space is zero.
    """
    if not generators:
        raise ValueError("need at least one generator")
    d = generators[0].dim
    n = _fold(_lcm, (g.order for g in generators), 1)
    n = conductor(n)
    gens = [g if g.order == n else RepMatrix(g.rows, n) for g in generators]
    phi = euler_phi(n)
    nunk = d * d * phi

    def unknown(i, j, t):
        return (i * d + j) * phi + t

    basis_el = [CyclotomicNumber.zeta_power(n, t) for t in range(phi)]
    rows = []
    # Hermitian symmetry: h_ji - conj(h_ij) = 0, coordinate-wise
    for i in range(d):
        for j in range(i, d):
            eq = [[Fraction(0)] * nunk for _ in range(phi)]
            for t in range(phi):
                for s, c in enumerate(basis_el[t].conj().coeffs):
                    eq[s][unknown(i, j, t)] -= c
                eq[t][unknown(j, i, t)] += 1
            rows.extend(eq)
    # invariance: sum_ij conj(g_ia) h_ij g_jb - h_ab = 0
    for g in gens:
        gd = g.dagger()
        eqs = {(a, b): [[Fraction(0)] * nunk for _ in range(phi)] for a in range(d) for b in range(d)}
        for i in range(d):
            for j in range(d):
                for a in range(d):
                    left = gd[a, i]
                    if left.is_zero():
                        continue
                    for b in range(d):
                        right = g[j, b]
                        if right.is_zero():
                            continue
                        lr = left * right
                        for t in range(phi):
                            coeffs = (lr * basis_el[t]).coeffs
                            for s, c in enumerate(coeffs):
                                if c:
                                    eqs[a, b][s][unknown(i, j, t)] += c
        for (a, b), eq in eqs.items():
            for t in range(phi):
                eq[t][unknown(a, b, t)] -= 1
            rows.extend(eq)
    kernel = rational_nullspace(rows, nunk)
    if not kernel:
        raise NoInvariantForm("no nonzero invariant Hermitian form")
    half = phi // 2 if n > 2 else 1
    assert len(kernel) % half == 0
    space_dim = len(kernel) // half

    def build(vec):
        ent = []
        for i in range(d):
            row = []
            for j in range(d):
                row.append(CyclotomicNumber(n, vec[unknown(i, j, 0): unknown(i, j, 0) + phi]))
            ent.append(row)
        return HermitianForm(ent, n)

    forms = [build(v) for v in kernel]
    chosen = None
    for H in forms:
        if H.nondegenerate:
            chosen = H
            break
    if chosen is None and len(forms) > 1:
        for coeffs in itertools.product((1, -1, 2), repeat=min(len(forms), 4)):
            vec = [sum(c * v[i] for c, v in zip(coeffs, kernel)) for i in range(nunk)]
            H = build(vec)
            if H.nondegenerate:
                chosen = H
                break
    if chosen is None:
        chosen = forms[0]
    for g in gens:
        assert chosen.is_invariant_under(g)
    return chosen, space_dim


# Burnside span --------------------------------------------------------------


class _Echelon:
    """Incremental row echelon basis over a cyclotomic field (pivots scaled to 1)."""

    def __init__(self, ncols: int, order: int):
        self.rows: list[list[CyclotomicNumber]] = []
        self.pivots: list[int] = []
        self.ncols = ncols
        self.order = order

    def add(self, vec) -> bool:
        v = list(vec)
        for r, c in zip(self.rows, self.pivots):
            f = v[c]
            if not f.is_zero():
                v = [x - f * y for x, y in zip(v, r)]
        c = next((i for i, x in enumerate(v) if not x.is_zero()), None)
        if c is None:
            return False
        inv = v[c].inverse()
        v = [x * inv for x in v]
        # keep earlier rows reduced at the new pivot
        for k, r in enumerate(self.rows):
            f = r[c]
            if not f.is_zero():
                self.rows[k] = [x - f * y for x, y in zip(r, v)]
        self.rows.append(v)
        self.pivots.append(c)
        return True

    def __len__(self):
        return len(self.rows)


def burnside_span(generators: list[RepMatrix], max_word_len: int) -> tuple[int, bool]:
    """Dimension of the span of all words of length <= max_word_len.

    The empty word (identity) is included.  irreducible is the Burnside
    criterion spanDim == d^2.
    """
    if max_word_len < 1:
        raise ValueError("max_word_len must be >= 1")
    d = generators[0].dim
    n = conductor(_fold(_lcm, (g.order for g in generators), 1))
    gens = [g if g.order == n else RepMatrix(g.rows, n) for g in generators]
    ech = _Echelon(d * d, n)
    ident = RepMatrix.identity(d, n)
    ech.add(ident.flat())
    layer = [ident]
    for _ in range(max_word_len):
        nxt = []
        for w in layer:
            for g in gens:
                m = w @ g
                if ech.add(m.flat()):
                    nxt.append(m)
        if not nxt or len(ech) == d * d:
            break
        layer = nxt
    return len(ech), len(ech) == d * d


# finite order -----------------------------------------------------------------


def _phi_at_most(bound: int) -> list[int]:
    return [m for m in range(1, 2 * bound * bound + 3) if euler_phi(m) <= bound]


def order_bound(dim: int, field_order: int) -> int:
    """M = lcm{m : phi(m) <= dim * phi(field_order)}: every finite order divides M."""
    return _fold(_lcm, _phi_at_most(dim * euler_phi(conductor(field_order))), 1)


def _mat_mod(rows, q):
    d = len(rows)
    return [[x % q for x in r] for r in rows]


def _matmul_mod(a, b, q):
    d = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(d)) % q for j in range(d)] for i in range(d)]


def _matpow_mod(a, e, q):
    d = len(a)
    result = [[1 if i == j else 0 for j in range(d)] for i in range(d)]
    base = a
    while e:
        if e & 1:
            result = _matmul_mod(result, base, q)
        e >>= 1
        if e:
            base = _matmul_mod(base, base, q)
    return result


def _is_ident(a):
    return all(x == (1 if i == j else 0) for i, r in enumerate(a) for j, x in enumerate(r))


def _split_prime(n: int, above: int, avoid: int) -> int:
    q = max(above, 2)
    while True:
        q = nextprime(q)
        if (q - 1) % n == 0 and avoid % q:
            return q


def finite_order_test(g: RepMatrix) -> tuple[bool, int | None]:
    """Decide exactly whether g has finite order; return (finite, order).

    g is finite iff g^M = 1 with M = order_bound(dim, field).  The power is
    evaluated in a residue field F_q with q = 1 mod n and q above every prime
    factor of M, where reduction is injective on finite subgroups; the order
    found there is then confirmed (or refuted) by one exact power.
    """
    n = g.order
    d = g.dim
    bound = d * euler_phi(n)
    M = order_bound(d, n)
    dens = _fold(_lcm, (x.den for x in g.flat()), 1)
    q = _split_prime(max(n, 2), bound + 1, dens)
    ring = ResidueRing(residue_contexts(n, q)[0])
    red = [[ring.reduce(x)[0] for x in r] for r in g.rows]
    if not _is_ident(_matpow_mod(red, M, q)):
        return False, None
    e = M
    for ell in factorint(M):
        while e % ell == 0 and _is_ident(_matpow_mod(red, e // ell, q)):
            e //= ell
    if (g ** e).is_identity():
        return True, e
    return False, None
