"""Exact arithmetic in cyclotomic fields Q(zeta_n).

Elements are stored in the power basis 1, z, ..., z^(phi(n)-1) modulo the
n-th cyclotomic polynomial, as integer numerators over one shared positive
denominator.  Fields are always kept at their conductor: Q(zeta_2m) is the
same field as Q(zeta_m) for odd m, so an element built from a 14th root of
unity lives in Q(zeta_7).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce as _fold
from numbers import Rational

import mpmath
from sympy import factorint
from sympy.polys.domains import ZZ
from sympy.polys.factortools import dup_zz_hensel_lift
from sympy.polys.galoistools import gf_factor_sqf

from .errors import DenominatorNotInvertible

__all__ = [
    "CyclotomicNumber",
    "GaloisEmbedding",
    "ComplexInterval",
    "ResidueContext",
    "ResidueRing",
    "cyclotomic_polynomial",
    "euler_phi",
    "conductor",
    "make_root",
    "embed_numeric",
    "residue_contexts",
    "reduce",
]


def euler_phi(n: int) -> int:
    result = n
    for p in factorint(n):
        result -= result // p
    return result


def conductor(n: int) -> int:
    """Smallest m with Q(zeta_m) = Q(zeta_n)."""
    if n < 1:
        raise ValueError("order must be positive")
    return n // 2 if n % 4 == 2 else n


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, constant term first.

    x^n - 1 divided by Phi_d for every proper divisor d of n.
    """
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _exact_div(num, cyclotomic_polynomial(d))
    return tuple(num)


def _exact_div(num: list[int], den: tuple[int, ...]) -> list[int]:
    # den is monic
    num = list(num)
    dn = len(den) - 1
    out = [0] * (len(num) - dn)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + dn]
        out[i] = c
        if c:
            for j, a in enumerate(den):
                num[i + j] -= c * a
    assert not any(num[:dn]), "non-exact polynomial division"
    return out


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[int, ...], ...]:
    """Power-basis vectors of zeta_n^e for e = 0 .. n-1."""
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    rows = []
    v = [1] + [0] * (deg - 1)
    for _ in range(n):
        rows.append(tuple(v))
        top = v[-1]
        v = [0] + v[:-1]
        if top:
            v = [a - top * b for a, b in zip(v, phi[:-1])]
    return tuple(rows)


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


class CyclotomicNumber:
    """An exact element of Q(zeta_n)."""

    __slots__ = ("order", "num", "den", "_hash")

    def __init__(self, order: int, coeffs, den: int = 1):
        order = int(order)
        if order < 1:
            raise ValueError("order must be positive")
        if order % 4 == 2:
            raise ValueError(f"Q(zeta_{order}) is stored at order {order // 2}")
        coeffs = list(coeffs)
        deg = len(cyclotomic_polynomial(order)) - 1
        if len(coeffs) != deg:
            raise ValueError(f"expected {deg} coefficients for order {order}")
        if den == 1 and all(type(c) is int for c in coeffs):
            num = coeffs
        else:
            fr = [Fraction(c) / den for c in coeffs]
            den = _fold(_lcm, (f.denominator for f in fr), 1)
            num = [f.numerator * (den // f.denominator) for f in fr]
        self.order = order
        self._set(num, den)

    def _set(self, num, den):
        if den < 0:
            num, den = [-a for a in num], -den
        g = _fold(math.gcd, num, den)
        if g > 1:
            num = [a // g for a in num]
            den //= g
        self.num = tuple(num)
        self.den = den
        self._hash = None

    @classmethod
    def _raw(cls, order: int, num, den: int = 1) -> CyclotomicNumber:
        obj = object.__new__(cls)
        obj.order = order
        obj._set(num, den)
        return obj

    # construction -------------------------------------------------------

    @classmethod
    def rational(cls, order: int, value) -> CyclotomicNumber:
        order = conductor(order)
        value = Fraction(value)
        deg = len(cyclotomic_polynomial(order)) - 1
        return cls._raw(order, [value.numerator] + [0] * (deg - 1), value.denominator)

    @classmethod
    def zero(cls, order: int = 1) -> CyclotomicNumber:
        return cls.rational(order, 0)

    @classmethod
    def one(cls, order: int = 1) -> CyclotomicNumber:
        return cls.rational(order, 1)

    @classmethod
    def zeta_power(cls, order: int, e: int) -> CyclotomicNumber:
        """zeta_order^e with order already at its conductor."""
        return cls._raw(order, _power_table(order)[e % order])

    # basic queries ------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.num)

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(a, self.den) for a in self.num)

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_one(self) -> bool:
        return self.den == 1 and self.num[0] == 1 and not any(self.num[1:])

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __repr__(self) -> str:
        terms = []
        for j, a in enumerate(self.num):
            if a:
                c = Fraction(a, self.den)
                terms.append(f"{c}" if j == 0 else f"{c}*z^{j}")
        body = " + ".join(terms) if terms else "0"
        return f"CyclotomicNumber[{self.order}]({body})"

    # field embedding changes --------------------------------------------

    def lift(self, order: int) -> CyclotomicNumber:
        """The same number viewed inside Q(zeta_order); self.order must divide order."""
        order = conductor(order)
        if order == self.order:
            return self
        if order % self.order:
            raise ValueError(f"Q(zeta_{self.order}) is not a subfield of Q(zeta_{order})")
        step = order // self.order
        table = _power_table(order)
        out = [0] * (len(table[0]))
        for j, a in enumerate(self.num):
            if a:
                row = table[(j * step) % order]
                for t, b in enumerate(row):
                    if b:
                        out[t] += a * b
        return CyclotomicNumber._raw(order, out, self.den)

    def _coerce(self, other):
        if isinstance(other, CyclotomicNumber):
            if other.order == self.order:
                return self, other
            m = conductor(_lcm(self.order, other.order))
            return self.lift(m), other.lift(m)
        if isinstance(other, (int, Rational)):
            return self, CyclotomicNumber.rational(self.order, other)
        return None

    # arithmetic ---------------------------------------------------------

    def __neg__(self):
        return CyclotomicNumber._raw(self.order, [-a for a in self.num], self.den)

    def __add__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        if a.den == b.den:
            num = [x + y for x, y in zip(a.num, b.num)]
            return CyclotomicNumber._raw(a.order, num, a.den)
        num = [x * b.den + y * a.den for x, y in zip(a.num, b.num)]
        return CyclotomicNumber._raw(a.order, num, a.den * b.den)

    __radd__ = __add__

    def __sub__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return CyclotomicNumber._raw(self.order, [a * other for a in self.num], self.den)
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        n = a.order
        deg = len(a.num)
        conv = [0] * (2 * deg - 1)
        for i, x in enumerate(a.num):
            if x:
                for j, y in enumerate(b.num):
                    if y:
                        conv[i + j] += x * y
        out = conv[:deg]
        table = _power_table(n)
        for e in range(deg, 2 * deg - 1):
            c = conv[e]
            if c:
                for t, r in enumerate(table[e % n]):
                    if r:
                        out[t] += c * r
        return CyclotomicNumber._raw(n, out, a.den * b.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        e = int(e)
        if e < 0:
            return self.inverse() ** (-e)
        result = CyclotomicNumber.one(self.order)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def galois(self, k: int) -> CyclotomicNumber:
        """Apply zeta -> zeta^k (k coprime to the field order)."""
        n = self.order
        k %= n
        if math.gcd(k, n) != 1:
            raise ValueError(f"exponent {k} not coprime to {n}")
        if k == 1:
            return self
        table = _power_table(n)
        out = [0] * len(self.num)
        for j, a in enumerate(self.num):
            if a:
                for t, r in enumerate(table[(j * k) % n]):
                    if r:
                        out[t] += a * r
        return CyclotomicNumber._raw(n, out, self.den)

    def conj(self) -> CyclotomicNumber:
        return self.galois(-1)

    def norm(self) -> Fraction:
        """Field norm down to Q."""
        n = self.order
        prod = self
        for k in range(2, n):
            if math.gcd(k, n) == 1:
                prod = prod * self.galois(k)
        assert prod.is_rational()
        return Fraction(prod.num[0], prod.den)

    def inverse(self) -> CyclotomicNumber:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        if self.is_rational():
            return CyclotomicNumber.rational(self.order, Fraction(self.den, self.num[0]))
        n = self.order
        others = CyclotomicNumber.one(n)
        for k in range(2, n):
            if math.gcd(k, n) == 1:
                others = others * self.galois(k)
        nrm = self * others
        assert nrm.is_rational()
        return others * Fraction(nrm.den, nrm.num[0])

    # equality / hashing --------------------------------------------------

    def __eq__(self, other):
        pair = self._coerce(other) if not isinstance(other, (float, complex)) else None
        if pair is None:
            return NotImplemented
        a, b = pair
        return a.den == b.den and a.num == b.num

    def canonical(self) -> CyclotomicNumber:
        """The same number in the smallest cyclotomic field containing it."""
        n = self.order
        for m in sorted(d for d in range(1, n) if n % d == 0 and d % 4 != 2):
            ks = [k for k in range(1, n) if k % m == 1 % m and math.gcd(k, n) == 1]
            if all(self.galois(k) == self for k in ks):
                return self._descend(m)
        return self

    def _descend(self, m: int) -> CyclotomicNumber:
        n = self.order
        if m == n:
            return self
        step = n // m
        dm = euler_phi(m)
        table = _power_table(n)
        # columns: lifts of zeta_m^j; solve for the rational coordinates
        cols = [table[(j * step) % n] for j in range(dm)]
        target = [Fraction(a, self.den) for a in self.num]
        sol = _solve_rational(cols, target)
        return CyclotomicNumber(m, sol)

    def __hash__(self):
        if self._hash is None:
            c = self.canonical()
            self._hash = hash((c.order, c.num, c.den))
        return self._hash

    # numerics --------------------------------------------------------------

    def to_complex(self, k: int = 1) -> complex:
        n = self.order
        return sum(
            complex(a) * complex(math.cos(2 * math.pi * j * k / n), math.sin(2 * math.pi * j * k / n))
            for j, a in enumerate(self.num)
            if a
        ) / self.den

    def multiplicative_order(self, limit: int | None = None) -> int | None:
        """Order as a root of unity, or None if it is not one."""
        n = self.order
        limit = limit or 2 * n
        for e in range(1, limit + 1):
            if limit % e == 0 and (self ** e).is_one():
                return e
        return None


def _solve_rational(cols, target):
    """Solve sum_j x_j * cols[j] = target over Q (consistent, full column rank)."""
    nrow = len(target)
    ncol = len(cols)
    rows = [[Fraction(cols[j][i]) for j in range(ncol)] + [target[i]] for i in range(nrow)]
    piv_row = 0
    pivots = []
    for c in range(ncol):
        r = next((i for i in range(piv_row, nrow) if rows[i][c] != 0), None)
        if r is None:
            continue
        rows[piv_row], rows[r] = rows[r], rows[piv_row]
        pv = rows[piv_row][c]
        rows[piv_row] = [x / pv for x in rows[piv_row]]
        for i in range(nrow):
            if i != piv_row and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[piv_row])]
        pivots.append(c)
        piv_row += 1
    sol = [Fraction(0)] * ncol
    for i, c in enumerate(pivots):
        sol[c] = rows[i][-1]
    return sol


def make_root(n: int, k: int = 1) -> CyclotomicNumber:
    """zeta_n^k as an exact element (primitive of order n when gcd(k, n) = 1)."""
    n, k = int(n), int(k)
    if n < 1:
        raise ValueError("n must be positive")
    if math.gcd(k, n) != 1:
        raise ValueError(f"gcd({k}, {n}) != 1: not a primitive root")
    if n % 4 == 2:
        # zeta_{2m} = -zeta_m^{(m+1)/2} for odd m
        m = n // 2
        root = CyclotomicNumber.zeta_power(m, (k * (m + 1) // 2) % m)
        return -root if k % 2 else root
    return CyclotomicNumber.zeta_power(n, k % n)


@dataclass(frozen=True)
class GaloisEmbedding:
    """The complex embedding zeta_n -> exp(2 pi i k / n)."""

    order: int
    exponent: int

    def __post_init__(self):
        n = conductor(self.order)
        if math.gcd(self.exponent, n) != 1:
            raise ValueError(f"exponent {self.exponent} not coprime to {n}")
        object.__setattr__(self, "order", n)
        object.__setattr__(self, "exponent", self.exponent % n if n > 1 else 0)

    def __matmul__(self, other: GaloisEmbedding) -> GaloisEmbedding:
        if other.order != self.order:
            raise ValueError("embeddings of different fields")
        return GaloisEmbedding(self.order, (self.exponent * other.exponent) % self.order)

    def conjugate(self) -> GaloisEmbedding:
        return GaloisEmbedding(self.order, -self.exponent)

    def exponent_for(self, field_order: int) -> int:
        if self.order % field_order:
            raise ValueError(f"Q(zeta_{field_order}) is not inside Q(zeta_{self.order})")
        return self.exponent % field_order if field_order > 1 else 0

    def __call__(self, x: CyclotomicNumber) -> CyclotomicNumber:
        return x.galois(self.exponent_for(x.order)) if x.order > 1 else x


@dataclass(frozen=True)
class ComplexInterval:
    """Midpoint with a certified error radius (a disc in C), at `prec` bits."""

    mid: mpmath.mpc
    rad: mpmath.mpf
    prec: int = 53

    def _round(self, prec, mid, rad):
        return ComplexInterval(mid, rad + abs(mid) * mpmath.mpf(2) ** (3 - prec), prec)

    def __add__(self, other):
        prec = min(self.prec, other.prec)
        with mpmath.workprec(prec):
            return self._round(prec, self.mid + other.mid, self.rad + other.rad)

    def __mul__(self, other):
        prec = min(self.prec, other.prec)
        with mpmath.workprec(prec):
            rad = abs(self.mid) * other.rad + abs(other.mid) * self.rad + self.rad * other.rad
            return self._round(prec, self.mid * other.mid, rad)

    def contains(self, z) -> bool:
        with mpmath.workprec(self.prec):
            return abs(self.mid - z) <= self.rad

    def __complex__(self):
        return complex(self.mid)


def embed_numeric(x: CyclotomicNumber, sigma: GaloisEmbedding | int = 1, precision: int = 30) -> ComplexInterval:
    """Evaluate x at an embedding with `precision` decimal digits."""
    if precision < 15:
        raise ValueError("precision must be at least 15 digits")
    if isinstance(sigma, GaloisEmbedding):
        k = sigma.exponent_for(x.order) if x.order > 1 else 0
    else:
        k = int(sigma)
    n = x.order
    with mpmath.workdps(precision + 10):
        total = mpmath.mpc(0)
        mass = 0
        for j, a in enumerate(x.num):
            if a:
                total += a * mpmath.expjpi(mpmath.mpf(2 * j * k) / n)
                mass += abs(a)
        mid = total / x.den
        eps = mpmath.mpf(2) ** (-mpmath.mp.prec + 4)
        rad = mpmath.mpf(mass) / x.den * (len(x.num) + 4) * eps
        prec = mpmath.mp.prec
    return ComplexInterval(mid, rad, prec)


# residue fields ------------------------------------------------------------


def _mult_order(q: int, n: int) -> int:
    if n == 1:
        return 1
    e, x = 1, q % n
    while x != 1:
        x = (x * q) % n
        e += 1
    return e


@dataclass(frozen=True)
class ResidueContext:
    """A prime q and one irreducible factor of Phi_n mod q.

    The residue field is F_q[x]/(factor), with zeta_n sent to the class of x.
    """

    order: int
    prime: int
    factor: tuple[int, ...]  # monic, constant term first
    field_size: int
    conjugation_descends: bool

    @property
    def degree(self) -> int:
        return len(self.factor) - 1

    @property
    def fixed_field_size(self) -> int:
        """Size of the field the unitary group is defined over (or the field itself)."""
        if self.conjugation_descends:
            return self.prime ** (self.degree // 2)
        return self.field_size


def residue_contexts(n: int, q: int) -> list[ResidueContext]:
    """One context per irreducible factor of Phi_n mod q, in a fixed order."""
    n = conductor(n)
    if math.gcd(q, n) != 1 or q < 2:
        raise ValueError(f"prime {q} divides {n}: ramified primes are not supported")
    if len(factorint(q)) != 1 or factorint(q).get(q) != 1:
        raise ValueError(f"{q} is not prime")
    phi = cyclotomic_polynomial(n)
    d = _mult_order(q, n)
    dense = [ZZ(c % q) for c in reversed(phi)]
    _, facs = gf_factor_sqf(dense, q, ZZ)
    factors = sorted(tuple(int(c) % q for c in reversed(f)) for f in facs)
    # complex conjugation is trivial on Q, so it never "descends" nontrivially there
    descends = n > 2 and d % 2 == 0 and pow(q, d // 2, n) == n - 1
    out = []
    for f in factors:
        assert len(f) - 1 == d
        out.append(ResidueContext(n, q, f, q ** d, descends))
    return out


def _poly_mulmod(a, b, f, m):
    """(a*b) mod (f, m); f monic, all tuples constant term first."""
    d = len(f) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    for e in range(len(prod) - 1, d - 1, -1):
        c = prod[e] % m
        if c:
            for t in range(d):
                prod[e - d + t] -= c * f[t]
        prod[e] = 0
    out = [c % m for c in prod[:d]]
    return tuple(out + [0] * (d - len(out)))


class ResidueRing:
    """O/P^k for P = (q, factor): (Z/q^k)[x] / (Hensel lift of factor)."""

    def __init__(self, ctx: ResidueContext, k: int = 1):
        if k < 1:
            raise ValueError("k must be at least 1")
        self.ctx = ctx
        self.k = k
        self.q = ctx.prime
        self.modulus = ctx.prime ** k
        self.degree = ctx.degree
        if k == 1:
            self.factor = ctx.factor
        else:
            self.factor = _hensel_factor(ctx, k)
        self.size = self.modulus ** self.degree

    @property
    def is_field(self) -> bool:
        return self.k == 1

    def zero(self):
        return (0,) * self.degree

    def one(self):
        return (1 % self.modulus,) + (0,) * (self.degree - 1)

    def add(self, a, b):
        return tuple((x + y) % self.modulus for x, y in zip(a, b))

    def neg(self, a):
        return tuple((-x) % self.modulus for x in a)

    def mul(self, a, b):
        return _poly_mulmod(a, b, self.factor, self.modulus)

    def pow(self, a, e: int):
        result, base = self.one(), a
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def is_unit(self, a) -> bool:
        return any(x % self.q for x in a)

    def unit_group_order(self) -> int:
        return (self.q ** self.degree - 1) * self.q ** (self.degree * (self.k - 1))

    def inv(self, a):
        if not self.is_unit(a):
            raise ZeroDivisionError("non-unit in residue ring")
        return self.pow(a, self.unit_group_order() - 1)

    def frobenius(self, a, times: int = 1):
        return self.pow(a, self.q ** times)

    def encode(self, a) -> int:
        code = 0
        for x in reversed(a):
            code = code * self.modulus + x
        return code

    def decode(self, code: int):
        out = []
        for _ in range(self.degree):
            code, r = divmod(code, self.modulus)
            out.append(r)
        return tuple(out)

    def root_image(self):
        """Image of zeta_n: the class of x."""
        if self.degree == 1:
            return ((-self.factor[0]) % self.modulus,)
        return (0, 1) + (0,) * (self.degree - 2)

    def reduce(self, x: CyclotomicNumber):
        if x.order != self.ctx.order:
            x = x.lift(self.ctx.order)
        m = self.modulus
        if x.den % self.q == 0:
            raise DenominatorNotInvertible(f"denominator {x.den} not invertible mod {self.q}")
        dinv = pow(x.den, -1, m)
        z = self.root_image()
        acc, zp = self.zero(), self.one()
        for a in x.num:
            if a % m:
                acc = self.add(acc, tuple((a * dinv * c) % m for c in zp))
            zp = self.mul(zp, z)
        return acc


def _hensel_factor(ctx: ResidueContext, k: int) -> tuple[int, ...]:
    phi = cyclotomic_polynomial(ctx.order)
    q = ctx.prime
    facs = [
        [ZZ(c) for c in reversed(c2.factor)]
        for c2 in residue_contexts(ctx.order, q)
    ]
    idx = next(i for i, c2 in enumerate(residue_contexts(ctx.order, q)) if c2.factor == ctx.factor)
    lifted = dup_zz_hensel_lift(ZZ(q), [ZZ(c) for c in reversed(phi)], facs, k, ZZ)
    m = q ** k
    return tuple(int(c) % m for c in reversed(lifted[idx]))


def reduce(x: CyclotomicNumber, ctx: ResidueContext, k: int = 1):
    """Reduce x modulo (q^k, factor); returns the coefficient tuple of the residue."""
    return ResidueRing(ctx, k).reduce(x)
