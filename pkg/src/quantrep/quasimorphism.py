"""Kähler-area cocycle on complex hyperbolic 2-space and its homogenization.

Points of the ball are negative lines for a Hermitian form <x, y> = x^* H y of
signature (2, 1).  For three negative vectors the Cartan angular invariant

    arg(-<x, y><y, z><z, x>)  in [-pi/2, pi/2]

is the area of the geodesic triangle up to a constant.  The cocycle is

    c(g, h) = kappa / (4 pi) * arg(-<x0, g x0><g x0, gh x0><gh x0, x0>)

with kappa = 2 by default, so |c| <= kappa / 8 = 1/4.

On words in a fixed generating set the prefix sum
    phi(s_1 ... s_n) = sum_i c(s_1 ... s_{i-1}, s_i)
satisfies phi(uv) = phi(u) + phi(v) + c(u, v), and its homogenization
    rot(w) = lim phi(w^n) / n = phi(w) + lim (1/n) sum_{k<n} c(w, w^k)
is the rotation number computed here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .burau import BurauParams
from .cyclotomic import GaloisEmbedding
from .errors import DegenerateTriple, NonConvergent
from .linalg import RepMatrix, invariant_hermitian_form
from .profile import group_profile

__all__ = [
    "IndefiniteModel",
    "CocycleValue",
    "RotationReport",
    "cartan_arg",
    "dupont_cocycle",
    "rotation_number",
    "word_quasimorphism",
    "burau_model",
    "embed_matrix",
]

DEFAULT_KAPPA = 2.0
_TOL = 1e-12


def embed_matrix(M: RepMatrix, sigma: GaloisEmbedding) -> np.ndarray:
    def val(x):
        return x.to_complex(sigma.exponent_for(x.order)) if x.order > 1 else complex(x.to_complex())

    return np.array([[val(x) for x in row] for row in M.rows], dtype=complex)


@dataclass
class IndefiniteModel:
    H: np.ndarray
    basepoint: np.ndarray
    kappa: float = DEFAULT_KAPPA
    generators: list[np.ndarray] = field(default_factory=list)

    def __post_init__(self):
        self.H = np.asarray(self.H, dtype=complex)
        self.basepoint = np.asarray(self.basepoint, dtype=complex)
        if np.max(np.abs(self.H - self.H.conj().T)) > 1e-12 * max(1.0, np.max(np.abs(self.H))):
            raise ValueError("H is not Hermitian")
        ev = np.linalg.eigvalsh(self.H)
        if not (np.sum(ev > 0) == 2 and np.sum(ev < 0) == 1):
            raise ValueError("H must have signature (2, 1)")
        if self.pair(self.basepoint, self.basepoint).real >= -1e-9:
            raise ValueError("basepoint is not a negative vector")

    @property
    def bound(self) -> float:
        return self.kappa / 8.0

    def pair(self, x, y):
        return np.vdot(x, self.H @ y)

    def residual(self, g: np.ndarray) -> float:
        return float(np.max(np.abs(g.conj().T @ self.H @ g - self.H)))

    def with_basepoint(self, v) -> IndefiniteModel:
        return IndefiniteModel(self.H, v, self.kappa, self.generators)


@dataclass(frozen=True)
class CocycleValue:
    value: float
    error_estimate: float

    def __float__(self):
        return self.value


def cartan_arg(x, y, z, H) -> float:
    H = np.asarray(H)
    pts = [np.asarray(v, dtype=complex) for v in (x, y, z)]
    norms = [np.vdot(v, H @ v).real for v in pts]
    if any(n >= 0 for n in norms):
        raise DegenerateTriple("points must be negative vectors")
    pts = [v / math.sqrt(-n) for v, n in zip(pts, norms)]
    a, b, c = pts
    prods = [np.vdot(a, H @ b), np.vdot(b, H @ c), np.vdot(c, H @ a)]
    if min(abs(t) for t in prods) < _TOL:
        raise DegenerateTriple("a pairing vanishes")
    return float(np.angle(-prods[0] * prods[1] * prods[2]))


def dupont_cocycle(g1: np.ndarray, g2: np.ndarray, model: IndefiniteModel, check: bool = True) -> CocycleValue:
    if check:
        for g in (g1, g2):
            if model.residual(g) > 1e-9 * max(1.0, np.linalg.norm(g) ** 2):
                raise ValueError("matrix does not preserve the form")
    x0 = model.basepoint
    y = g1 @ x0
    z = g1 @ (g2 @ x0)
    arg = cartan_arg(x0, y, z, model.H)
    eps = np.finfo(float).eps * (np.linalg.cond(g1) * np.linalg.cond(g2))
    return CocycleValue(model.kappa / (4 * math.pi) * arg, float(eps))


def _unit(v):
    return v / np.linalg.norm(v)


def _cocycles_along(model: IndefiniteModel, left: np.ndarray, points: np.ndarray) -> np.ndarray:
    """kappa/4pi * arg(-<x0, left><left, p><p, x0>) for each row p of points (unit vectors)."""
    H, x0 = model.H, _unit(model.basepoint)
    a = np.vdot(x0, H @ left)
    b = (points @ H.T) @ left.conj()  # <left, p> = left^* H p
    c = (points.conj() @ H) @ x0  # <p, x0>
    return model.kappa / (4 * math.pi) * np.angle(-a * b * c)


def word_quasimorphism(word, model: IndefiniteModel, generators: list[np.ndarray] | None = None) -> float:
    """phi(w) = sum over letters of c(prefix, letter)."""
    mats = _letters(word, model, generators)
    if len(mats) < 2:
        return 0.0
    x0 = _unit(model.basepoint)
    prefix = [x0]
    P = np.eye(len(x0), dtype=complex)
    for g in mats:
        P = P @ g
        P /= np.max(np.abs(P))
        prefix.append(_unit(P @ x0))
    total = 0.0
    for i in range(1, len(mats)):
        total += model.kappa / (4 * math.pi) * cartan_arg(x0, prefix[i], prefix[i + 1], model.H)
    return total


def _letters(word, model, generators):
    gens = generators if generators is not None else model.generators
    if isinstance(word, np.ndarray):
        return [word]
    mats = []
    inv = {}
    for s in word:
        g = gens[abs(s) - 1]
        if s < 0:
            if s not in inv:
                inv[s] = np.linalg.inv(g)
            g = inv[s]
        mats.append(g)
    return mats


def _word_matrix(mats, dim):
    out = np.eye(dim, dtype=complex)
    for g in mats:
        out = out @ g
        out /= np.max(np.abs(out))
    return out


@dataclass(frozen=True)
class RotationReport:
    value: float
    estimates: tuple[float, ...]
    deltas: tuple[float, ...]
    n_max: int


def rotation_number(word, model: IndefiniteModel, n_max: int = 4096, generators=None,
                    tol: float = 1e-3) -> RotationReport:
    """Homogenized quasimorphism of a word (or of a single matrix as a one-letter word).

    The tail average is Richardson-extrapolated over n = 16, 32, ..., n_max.
    """
    if n_max < 16:
        raise ValueError("n_max must be at least 16")
    mats = _letters(word, model, generators)
    if not mats:
        return RotationReport(0.0, (0.0,), (0.0,), n_max)
    phi = word_quasimorphism(word, model, generators)
    W = _word_matrix(mats, model.H.shape[0])
    x0 = _unit(model.basepoint)
    orbit = np.empty((n_max + 1, len(x0)), dtype=complex)
    orbit[0] = x0
    for j in range(1, n_max + 1):
        orbit[j] = _unit(W @ orbit[j - 1])
    # c(w, w^k) for k = 1..n_max-1 uses the points w x0 and w^{k+1} x0
    terms = _cocycles_along(model, orbit[1], orbit[2:n_max + 1])
    csum = np.concatenate([[0.0], np.cumsum(terms)])
    ns = []
    n = 16
    while n <= n_max:
        ns.append(n)
        n *= 2
    plain = [phi + csum[n - 1] / n for n in ns]
    rich = [2 * plain[i] - plain[i - 1] for i in range(1, len(plain))] or plain
    deltas = tuple(abs(rich[i] - rich[i - 1]) for i in range(1, len(rich)))
    if deltas and deltas[-1] > tol and deltas[-1] >= deltas[0]:
        raise NonConvergent(f"rotation-number estimates do not settle: deltas {deltas}")
    return RotationReport(float(rich[-1]), tuple(float(x) for x in rich), deltas, n_max)


def burau_model(p: int, exponent: int | None = None, strands: int = 4, A=None,
                root_exponent: int | None = None, kappa: float = DEFAULT_KAPPA) -> IndefiniteModel:
    """The Burau form embedded at an indefinite class, with the Burau generators."""
    params = BurauParams.make(p, strands, A=A, root_exponent=root_exponent)
    gens = params.generators()
    H, _ = invariant_hermitian_form(gens)
    if exponent is None:
        prof = group_profile(p, A=params.A)
        indefinite = [f for f in prof.factors if not f.compact]
        if not indefinite:
            raise ValueError(f"no indefinite class for p={p}")
        exponent = indefinite[0].embedding.exponent
    sigma = GaloisEmbedding(params.q.order, exponent)
    Hn = embed_matrix(H, sigma)
    Hn = (Hn + Hn.conj().T) / 2
    ev, vec = np.linalg.eigh(Hn)
    neg = int(np.sum(ev < 0))
    if neg == 0 or neg == len(ev):
        raise ValueError(f"form is definite at exponent {exponent}")
    if neg == 2:
        Hn, ev, vec = -Hn, -ev[::-1], vec[:, ::-1]
    Hn = Hn / np.max(np.abs(Hn))
    base = vec[:, 0]
    return IndefiniteModel(Hn, base, kappa, [embed_matrix(g, sigma) for g in gens])
