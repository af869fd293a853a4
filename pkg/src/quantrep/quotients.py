"""Finite quotients: reduction mod q^k, group closure, target orders, spectral gaps.

A matrix over R = (Z/m)[x]/(f), m = q^k, deg f = d, is stored as its vector of
L = n*n*d digits in [0, m); the packed key is sum digit_i * m^i.  Right
multiplication by a fixed matrix G is Z/m-linear on these vectors, so a whole
frontier of states is multiplied by G with one integer matrix product.

Projective states are scaled so that the first unit entry (row-major) is 1.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh

from .cyclotomic import ResidueContext, ResidueRing, conductor, residue_contexts
from .errors import BudgetExceeded, SpectralBudgetExceeded
from .linalg import RepMatrix

__all__ = [
    "ReducedGenSet",
    "ClosureReport",
    "LiftReport",
    "GapReport",
    "reduce_generator_set",
    "group_closure",
    "target_order",
    "lift_check",
    "cayley_gap",
    "usable_primes",
    "contexts_for",
]

KEY_LIMIT = 2 ** 62
BITMAP_LIMIT = 2 ** 30
CHUNK = 1 << 16
MULTAB_LIMIT = 2048
DEFAULT_SPECTRAL_BUDGET = 200_000


# residue ring tables ------------------------------------------------------------


class _RingTables:
    """Vectorized arithmetic on all elements of a small residue ring."""

    def __init__(self, ring: ResidueRing):
        self.ring = ring
        m, d = ring.modulus, ring.degree
        self.m, self.d, self.q = m, d, ring.q
        E = m ** d
        if E > 5_000_000:
            raise BudgetExceeded(f"residue ring of size {E} is too large to tabulate")
        self.size = E
        idx = np.arange(E, dtype=np.int64)
        self.pw = m ** np.arange(d, dtype=np.int64)
        digits = (idx[:, None] // self.pw) % m
        f = np.array(ring.factor[:d], dtype=np.int64)
        # multmat[c][:, j] = digits of c * x^j
        mm = np.zeros((E, d, d), dtype=np.int64)
        X = digits.copy()
        for j in range(d):
            mm[:, :, j] = X
            top = X[:, d - 1].copy()
            X = np.concatenate([np.zeros((E, 1), dtype=np.int64), X[:, : d - 1]], axis=1)
            X = (X - top[:, None] * f[None, :]) % m
        self.multmat = mm
        self.unit = np.any(digits % self.q != 0, axis=1)
        self.inv = self._inverses(ring.unit_group_order())
        self.multab = None
        if E <= MULTAB_LIMIT:
            self.multab = np.stack([self.mul(np.full(E, c, dtype=np.int64), idx) for c in range(E)])

    def pack(self, digits):
        return digits @ self.pw

    def mul(self, a_idx, b_idx):
        b = (b_idx[:, None] // self.pw) % self.m
        return self.pack(np.einsum("eij,ej->ei", self.multmat[a_idx], b) % self.m)

    def _inverses(self, unit_order):
        idx = np.arange(self.size, dtype=np.int64)
        base = np.where(self.unit, idx, 1)
        result = np.ones(self.size, dtype=np.int64)
        e = unit_order - 1
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return np.where(self.unit, result, -1)


# reduced generator sets -------------------------------------------------------


@dataclass
class ReducedGenSet:
    ring: ResidueRing
    dim: int
    generators: list[tuple]  # each a flat tuple of ring elements, row-major; inverses appended
    projective: bool
    n_original: int
    _tables: _RingTables | None = field(default=None, repr=False)

    @property
    def ctx(self) -> ResidueContext:
        return self.ring.ctx

    @property
    def k(self) -> int:
        return self.ring.k

    @property
    def tables(self) -> _RingTables:
        if self._tables is None:
            self._tables = _RingTables(self.ring)
        return self._tables

    @property
    def width(self) -> int:
        return self.dim * self.dim * self.ring.degree

    def key_space(self) -> int:
        return self.ring.modulus ** self.width

    # digit / key conversions
    def _pw(self):
        return self.ring.modulus ** np.arange(self.width, dtype=np.int64)

    def matrix_digits(self, mat) -> np.ndarray:
        return np.array([c for entry in mat for c in entry], dtype=np.int64)

    def unpack(self, keys: np.ndarray) -> np.ndarray:
        m = self.ring.modulus
        if m & (m - 1) == 0:
            bits = m.bit_length() - 1
            shifts = np.arange(self.width, dtype=np.int64) * bits
            return (keys[:, None] >> shifts) & (m - 1)
        return (keys[:, None] // self._pw()) % m

    def pack(self, digits: np.ndarray) -> np.ndarray:
        return digits @ self._pw()

    def right_matrix(self, mat) -> np.ndarray:
        """R with digits(M @ G) = R @ digits(M) mod m."""
        n, d = self.dim, self.ring.degree
        T = self.tables
        R = np.zeros((self.width, self.width), dtype=np.int64)
        for c in range(n):
            for b in range(n):
                g = mat[c * n + b]
                Mg = T.multmat[self.ring.encode(g)]
                for a in range(n):
                    r0, c0 = (a * n + b) * d, (a * n + c) * d
                    R[r0:r0 + d, c0:c0 + d] = Mg
        return R

    def normalize(self, digits: np.ndarray) -> np.ndarray:
        if not self.projective:
            return digits
        T = self.tables
        n2, d, m = self.dim * self.dim, self.ring.degree, self.ring.modulus
        ent = digits.reshape(-1, n2, d)
        idx = ent @ T.pw
        first = np.argmax(T.unit[idx], axis=1)
        rows = np.arange(len(ent))
        scale = T.inv[idx[rows, first]]
        if T.multab is not None:
            scaled = T.multab[scale[:, None], idx]
            return ((scaled[:, :, None] // T.pw) % m).reshape(-1, n2 * d)
        if d == 1:
            out = (ent * scale[:, None, None]) % m
        else:
            out = np.einsum("cij,cej->cei", T.multmat[scale], ent) % m
        return out.reshape(-1, n2 * d)

    def keys_of(self, digits: np.ndarray) -> np.ndarray:
        """Normalized packed keys of a batch of digit vectors."""
        if self.projective and self.tables.multab is not None:
            T = self.tables
            n2 = self.dim * self.dim
            idx = digits.reshape(-1, n2, self.ring.degree) @ T.pw
            first = np.argmax(T.unit[idx], axis=1)
            scale = T.inv[idx[np.arange(len(idx)), first]]
            scaled = T.multab[scale[:, None], idx]
            return scaled @ (T.size ** np.arange(n2, dtype=np.int64))
        return self.pack(self.normalize(digits))

    def identity_key(self) -> int:
        one, zero = self.ring.one(), self.ring.zero()
        ident = [one if i == j else zero for i in range(self.dim) for j in range(self.dim)]
        digits = self.normalize(self.matrix_digits(ident)[None, :])
        return int(self.pack(digits)[0])

    def key_of(self, mat) -> int:
        return int(self.pack(self.normalize(self.matrix_digits(mat)[None, :]))[0])

    def det(self, mat):
        R, n = self.ring, self.dim
        rows = [mat[i * n:(i + 1) * n] for i in range(n)]
        return _ring_det(R, rows)

    def determinant_image_order(self) -> int:
        """Order of the subgroup of units generated by the generator determinants."""
        R = self.ring
        dets = {self.det(g) for g in self.generators}
        seen = {R.one()}
        frontier = [R.one()]
        while frontier:
            nxt = []
            for x in frontier:
                for y in dets:
                    z = R.mul(x, y)
                    if z not in seen:
                        seen.add(z)
                        nxt.append(z)
            frontier = nxt
        return len(seen)


def _ring_det(R: ResidueRing, rows):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = R.zero()
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = R.mul(rows[0][j], _ring_det(R, minor))
        total = R.add(total, term if j % 2 == 0 else R.neg(term))
    return total


def contexts_for(gens: list[RepMatrix], q: int) -> list[ResidueContext]:
    return residue_contexts(max(conductor(gens[0].order), 1), q)


def reduce_generator_set(gens: list[RepMatrix], ctx: ResidueContext, k: int = 1,
                         projective: bool = False) -> ReducedGenSet:
    """Reduce exact generators mod (q^k, factor) and append their inverses."""
    ring = ResidueRing(ctx, k)
    reduced, seen_inv = [], []
    for g in gens:
        reduced.append(tuple(ring.reduce(x) for x in g.flat()))
    for g in gens:
        seen_inv.append(tuple(ring.reduce(x) for x in g.inverse().flat()))
    rgs = ReducedGenSet(ring, gens[0].dim, reduced + seen_inv, projective, len(gens))
    for g in rgs.generators:
        if not ring.is_unit(rgs.det(g)):
            raise ValueError("reduced generator is not invertible")
    return rgs


# closure -----------------------------------------------------------------------


@dataclass
class ClosureReport:
    order: int
    truncated: bool
    target_order: int | None
    verdict: str
    wall_time: float
    state_count: int
    scalar_count: int | None = None
    keys: np.ndarray | None = field(default=None, repr=False)


class _Visited:
    def __init__(self, space: int):
        self.bitmap = space <= BITMAP_LIMIT
        if self.bitmap:
            self.bits = np.zeros(space // 8 + 1, dtype=np.uint8)
        else:
            self.sorted = np.empty(0, dtype=np.int64)

    def filter_new(self, keys: np.ndarray) -> np.ndarray:
        keys = np.unique(keys)
        if self.bitmap:
            hit = (self.bits[keys >> 3] >> (keys & 7).astype(np.uint8)) & 1
            return keys[hit == 0]
        if len(self.sorted) == 0:
            return keys
        pos = np.searchsorted(self.sorted, keys)
        pos[pos == len(self.sorted)] = 0
        return keys[self.sorted[pos] != keys]

    def add(self, keys: np.ndarray) -> None:
        if self.bitmap:
            np.bitwise_or.at(self.bits, keys >> 3, (1 << (keys & 7)).astype(np.uint8))
        else:
            self.sorted = np.union1d(self.sorted, keys)


def _verdict(order, truncated, target):
    if truncated or target is None:
        return "Unknown"
    if order == target:
        return "Full"
    return "Proper" if target % order == 0 else "Unknown"


def group_closure(rgs: ReducedGenSet, state_budget: int = 20_000_000, target: int | None = None,
                  keep_keys: bool = True) -> ClosureReport:
    """Breadth-first enumeration of the generated group on packed keys."""
    if state_budget < 1:
        raise ValueError("state budget must be positive")
    if rgs.key_space() >= KEY_LIMIT:
        raise BudgetExceeded("packed states do not fit in 63 bits")
    t0 = time.perf_counter()
    if target is None and rgs.dim in (2, 3):
        target = target_order(rgs.dim, rgs.ctx, rgs.projective, rgs.determinant_image_order(), rgs.k)
    m = float(rgs.ring.modulus)
    mats = [rgs.right_matrix(g).T.astype(np.float64) for g in rgs.generators]
    visited = _Visited(rgs.key_space())
    start = np.array([rgs.identity_key()], dtype=np.int64)
    visited.add(start)
    levels = [start]
    frontier = start
    count = 1
    truncated = False
    while len(frontier) and not truncated:
        nxt = []
        for lo in range(0, len(frontier), CHUNK):
            digits = rgs.unpack(frontier[lo:lo + CHUNK]).astype(np.float64)
            cand = []
            for R in mats:
                prod = np.fmod(digits @ R, m).astype(np.int64)
                cand.append(rgs.keys_of(prod))
            new = visited.filter_new(np.concatenate(cand))
            visited.add(new)
            nxt.append(new)
            count += len(new)
            if count > state_budget:
                truncated = True
                break
        frontier = np.concatenate(nxt) if nxt else np.empty(0, dtype=np.int64)
        levels.append(frontier)
    keys = np.sort(np.concatenate(levels)) if keep_keys else None
    scalars = None
    if not rgs.projective and not truncated and keys is not None:
        scalars = _count_scalars(rgs, keys)
    return ClosureReport(count, truncated, target, _verdict(count, truncated, target),
                         time.perf_counter() - t0, count, scalars, keys)


def _count_scalars(rgs: ReducedGenSet, keys: np.ndarray) -> int:
    n, d = rgs.dim, rgs.ring.degree
    total = 0
    for lo in range(0, len(keys), CHUNK):
        ent = rgs.unpack(keys[lo:lo + CHUNK]).reshape(-1, n * n, d)
        diag = [i * n + i for i in range(n)]
        off = [i for i in range(n * n) if i not in diag]
        ok = np.all(ent[:, off] == 0, axis=(1, 2)) if off else np.ones(len(ent), bool)
        for i in diag[1:]:
            ok &= np.all(ent[:, i] == ent[:, 0], axis=1)
        total += int(ok.sum())
    return total


# target orders -------------------------------------------------------------------


def _sl_order(n: int, s: int) -> int:
    out = s ** (n * (n - 1) // 2)
    for i in range(2, n + 1):
        out *= s ** i - 1
    return out


def _su_order(n: int, s: int) -> int:
    out = s ** (n * (n - 1) // 2)
    for i in range(2, n + 1):
        out *= s ** i - (-1) ** i
    return out


def target_order(dim: int, ctx: ResidueContext, projective: bool, det_image_order: int = 1, k: int = 1) -> int:
    """Order of {g in SL or SU : det g in D} (optionally mod scalars), |D| = det_image_order.

    Linear type over F_s when conjugation does not descend to the residue
    field, unitary type over F_{s0}, s0^2 = s, when it does.  At level q^k the
    kernel of reduction contributes s_def^((dim^2 - 1)(k - 1)), s_def being the
    field the group is defined over.
    """
    if dim not in (2, 3):
        raise ValueError("target orders are implemented for dim 2 and 3")
    if ctx.conjugation_descends:
        s0 = ctx.fixed_field_size
        order, center = _su_order(dim, s0), s0 + 1
    else:
        s0 = ctx.field_size
        order, center = _sl_order(dim, s0), s0 - 1
    if center % det_image_order:
        raise ValueError("determinant image does not fit in the unit group")
    order *= det_image_order
    if projective:
        order //= math.gcd(dim * det_image_order, center)
    return order * s0 ** ((dim * dim - 1) * (k - 1))


# lifting ------------------------------------------------------------------------


@dataclass
class LiftReport:
    order_q: int
    order_qk: int
    ratio: Fraction | None
    predicted: int
    verdict: str


def lift_check(base: ClosureReport, lifted: ClosureReport, rgs_lifted: ReducedGenSet) -> LiftReport:
    ctx, n, k = rgs_lifted.ctx, rgs_lifted.dim, rgs_lifted.k
    s_def = ctx.fixed_field_size
    predicted = s_def ** ((n * n - 1) * (k - 1))
    if base.truncated or lifted.truncated:
        return LiftReport(base.order, lifted.order, None, predicted, "Unknown")
    ratio = Fraction(lifted.order, base.order)
    verdict = "Full" if ratio == predicted and base.verdict == "Full" else "Proper"
    return LiftReport(base.order, lifted.order, ratio, predicted, verdict)


# spectral gap -------------------------------------------------------------------


@dataclass
class GapReport:
    group_order: int
    generator_count: int
    lambda2: float
    residual: float

    @property
    def gap(self) -> float:
        return 1.0 - self.lambda2


def cayley_gap(rgs: ReducedGenSet, closure: ClosureReport, spectral_budget: int = DEFAULT_SPECTRAL_BUDGET,
               seed: int = 0) -> GapReport:
    """Second eigenvalue of the averaged right-multiplication operator on the group."""
    if closure.truncated or closure.keys is None:
        raise ValueError("need a complete closure with keys")
    N = len(closure.keys)
    if N > spectral_budget:
        raise SpectralBudgetExceeded(f"{N} states exceed spectral budget {spectral_budget}")
    keys = closure.keys
    m = float(rgs.ring.modulus)
    S = len(rgs.generators)
    cols = np.empty((S, N), dtype=np.int64)
    digits = rgs.unpack(keys).astype(np.float64)
    for s, g in enumerate(rgs.generators):
        R = rgs.right_matrix(g).T.astype(np.float64)
        nb = rgs.keys_of(np.fmod(digits @ R, m).astype(np.int64))
        cols[s] = np.searchsorted(keys, nb)
    rows = np.tile(np.arange(N), S)
    A = sp.csr_matrix((np.full(N * S, 1.0 / S), (rows, cols.ravel())), shape=(N, N))
    lam, vec = _second_eigen(A, seed)
    residual = float(np.linalg.norm(A @ vec - lam * vec))
    return GapReport(N, S, lam, residual)


def _second_eigen(A, seed: int):
    N = A.shape[0]
    if N == 1:
        return 1.0, np.ones(1)
    if N <= 2000:
        w, v = np.linalg.eigh(A.toarray())
        return float(w[-2]), v[:, -2]
    ones = np.ones(N)

    def mv(x):
        x = np.ravel(x)
        return A @ x - (2.0 / N) * ones * x.sum()

    op = LinearOperator((N, N), matvec=mv, dtype=np.float64)
    v0 = np.random.default_rng(seed).standard_normal(N)
    try:
        w, v = eigsh(op, k=1, which="LA", v0=v0, tol=1e-12, maxiter=20 * N)
    except ArpackNoConvergence as exc:  # pragma: no cover
        raise SpectralBudgetExceeded("eigensolver did not converge") from exc
    return float(w[0]), v[:, 0]


# prime selection -----------------------------------------------------------------


def usable_primes(gens: list[RepMatrix], projective: bool, budget: int, count: int,
                  limit: int = 200) -> list[tuple[int, ResidueContext, int]]:
    """First `count` primes whose predicted closure fits the budget: (q, ctx, target)."""
    from sympy import primerange

    n = conductor(gens[0].order)
    out = []
    for q in primerange(2, limit):
        if n % q == 0:
            continue
        ctx = contexts_for(gens, q)[0]
        try:
            rgs = reduce_generator_set(gens, ctx, 1, projective)
        except (ZeroDivisionError, ValueError):
            continue
        t = target_order(rgs.dim, ctx, projective, rgs.determinant_image_order())
        if t <= budget:
            out.append((q, ctx, t))
            if len(out) == count:
                break
    return out
