"""Colors, admissible trivalent colorings and conformal-block dimensions.

Odd p = 2r+1 uses the colors {0, 2, ..., 2r-2}; even p = 2r+2 uses
{0, 1, ..., r-1}.  A triple (a, b, c) is admissible when a+b+c is even,
|a-b| <= c <= a+b and a+b+c <= 2(p-2).

Two independent counts are provided:

* ``block_dimension`` enumerates colorings of an explicit trivalent graph;
* ``verlinde_dimension`` multiplies fusion matrices N_a (a transfer-matrix
  evaluation of the same fusion rules), never looking at a graph.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .cyclotomic import CyclotomicNumber
from .errors import MalformedGraph

__all__ = [
    "ColorSystem",
    "TrivalentGraph",
    "BlockSpec",
    "Equivalence",
    "admissible",
    "block_dimension",
    "verlinde_dimension",
    "twist_eigenvalues",
    "equivalent_roots",
    "chain_graph",
    "necklace_graph",
    "standard_graphs",
]


@dataclass(frozen=True)
class ColorSystem:
    p: int

    def __post_init__(self):
        if self.p < 3:
            raise ValueError("p must be >= 3")

    @property
    def parity(self) -> str:
        return "odd" if self.p % 2 else "even"

    @property
    def colors(self) -> tuple[int, ...]:
        if self.p % 2:
            r = (self.p - 1) // 2
            return tuple(range(0, 2 * r - 1, 2))
        r = (self.p - 2) // 2
        return tuple(range(r))

    def __contains__(self, c) -> bool:
        return c in self.colors


def admissible(a: int, b: int, c: int, sys: ColorSystem) -> bool:
    s = a + b + c
    return s % 2 == 0 and abs(a - b) <= c <= a + b and s <= 2 * (sys.p - 2)


@lru_cache(maxsize=None)
def _admissible_triples(p: int) -> frozenset:
    sys = ColorSystem(p)
    return frozenset(t for t in itertools.product(sys.colors, repeat=3) if admissible(*t, sys))


@lru_cache(maxsize=None)
def _fusion(p: int) -> np.ndarray:
    sys = ColorSystem(p)
    cols = sys.colors
    k = len(cols)
    N = np.zeros((k, k, k), dtype=object)
    for i, a in enumerate(cols):
        for j, b in enumerate(cols):
            for l, c in enumerate(cols):
                N[i, j, l] = int(admissible(a, b, c, sys))
    return N


# graphs -----------------------------------------------------------------------


@dataclass
class TrivalentGraph:
    """Trivalent graph with legs.

    vertices: list of 3-tuples of edge ids; an edge id appearing twice at a
    vertex is a loop.  legs: edge ids whose color is fixed by the boundary
    labels, in label order.  free_loops counts vertex-free circles (torus).
    """

    vertices: list[tuple[int, int, int]]
    legs: list[int]
    free_loops: int = 0
    name: str = ""

    @property
    def edges(self) -> list[int]:
        seen = []
        for v in self.vertices:
            for e in v:
                if e not in seen:
                    seen.append(e)
        for e in self.legs:
            if e not in seen:
                seen.append(e)
        return seen

    def validate(self, genus: int, n: int) -> None:
        incidence: dict[int, int] = {}
        for v in self.vertices:
            if len(v) != 3:
                raise MalformedGraph("vertex is not trivalent")
            for e in v:
                incidence[e] = incidence.get(e, 0) + 1
        for e in self.legs:
            incidence[e] = incidence.get(e, 0) + 1
        if len(self.legs) != n or len(set(self.legs)) != n:
            raise MalformedGraph("legs do not match boundary labels")
        if genus == 1 and n == 0:
            if self.free_loops != 1 or self.vertices:
                raise MalformedGraph("closed torus is one free loop")
            return
        if 2 * genus - 2 + n <= 0:
            if self.vertices or self.free_loops:
                raise MalformedGraph("sphere, disk and annulus carry no vertices")
            return
        if any(k != 2 for k in incidence.values()):
            raise MalformedGraph("every edge must have exactly two ends")
        if True:
            if len(self.vertices) != 2 * genus - 2 + n:
                raise MalformedGraph(f"expected {2 * genus - 2 + n} vertices, got {len(self.vertices)}")
            internal = [e for e in incidence if e not in self.legs]
            if len(internal) + n != 3 * genus - 3 + 2 * n:
                raise MalformedGraph("edge count does not match a pants decomposition")
            if len(internal) - len(self.vertices) + 1 != genus:
                raise MalformedGraph("graph genus does not match")
            _check_connected(self)


def _check_connected(g: TrivalentGraph) -> None:
    if not g.vertices:
        return
    adj: dict[int, list[int]] = {}
    for vi, v in enumerate(g.vertices):
        for e in v:
            adj.setdefault(e, []).append(vi)
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for e in g.vertices[v]:
            for w in adj[e]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
    if len(seen) != len(g.vertices):
        raise MalformedGraph("graph is disconnected")


class _Ids:
    def __init__(self):
        self.k = 0

    def __call__(self):
        self.k += 1
        return self.k - 1


def _degenerate(genus: int, n: int) -> TrivalentGraph | None:
    if genus == 0 and n <= 2:
        return TrivalentGraph([], list(range(n)), name=("sphere", "disk", "annulus")[n])
    if genus == 1 and n == 0:
        return TrivalentGraph([], [], free_loops=1, name="torus")
    return None


def _caterpillar(attach: list[int], ids: _Ids) -> list[tuple[int, int, int]]:
    m = len(attach)
    if m == 3:
        return [tuple(attach)]
    spine = [ids() for _ in range(m - 3)]
    out = [(attach[0], attach[1], spine[0])]
    for i in range(1, m - 3):
        out.append((spine[i - 1], attach[i + 1], spine[i]))
    out.append((spine[-1], attach[-2], attach[-1]))
    return out


def chain_graph(genus: int, n: int) -> TrivalentGraph:
    """Caterpillar: g tadpole loops followed by n legs along a spine."""
    deg = _degenerate(genus, n)
    if deg is not None:
        return deg
    ids = _Ids()
    legs = [ids() for _ in range(n)]
    if genus == 1 and n == 1:
        loop = ids()
        return TrivalentGraph([(loop, loop, legs[0])], legs, name="chain(1,1)")
    vertices, stems = [], []
    for _ in range(genus):
        loop, stem = ids(), ids()
        vertices.append((loop, loop, stem))
        stems.append(stem)
    attach = stems + legs
    if len(attach) == 2:
        # two tadpoles joined by one edge, or one tadpole on the single leg
        a, b = attach
        vertices = [tuple(a if e == b else e for e in v) for v in vertices]
    else:
        vertices.extend(_caterpillar(attach, ids))
    return TrivalentGraph(vertices, legs, name=f"chain({genus},{n})")


def necklace_graph(genus: int, n: int) -> TrivalentGraph:
    """A cycle of 2g-2+n vertices carrying the legs and g-1 chords.

    In genus 0 this is the caterpillar on the rotated leg order, a different
    pants decomposition from the chain for four or more legs.
    """
    deg = _degenerate(genus, n)
    if deg is not None:
        return deg
    ids = _Ids()
    legs = [ids() for _ in range(n)]
    if genus == 0:
        order = legs[1:] + legs[:1]
        return TrivalentGraph(_caterpillar(order, ids), legs, name=f"rotated(0,{n})")
    m = 2 * genus - 2 + n
    if m == 1:
        loop = ids()
        return TrivalentGraph([(loop, loop, legs[0])], legs, name="necklace(1,1)")
    cyc = [ids() for _ in range(m)]
    thirds = list(legs)
    for _ in range(genus - 1):
        c = ids()
        thirds.extend([c, c])
    vertices = [(cyc[i - 1], cyc[i], thirds[i]) for i in range(m)]
    return TrivalentGraph(vertices, legs, name=f"necklace({genus},{n})")


def standard_graphs(genus: int, n: int) -> list[TrivalentGraph]:
    return [chain_graph(genus, n), necklace_graph(genus, n)]


@dataclass
class BlockSpec:
    genus: int
    labels: tuple[int, ...]
    graph: TrivalentGraph | None = None

    def __post_init__(self):
        self.labels = tuple(self.labels)
        if self.genus < 0:
            raise MalformedGraph("negative genus")
        if self.graph is None:
            self.graph = chain_graph(self.genus, len(self.labels))
        self.graph.validate(self.genus, len(self.labels))


def block_dimension(spec: BlockSpec, sys: ColorSystem) -> int:
    """Number of admissible colorings of spec.graph with legs fixed to spec.labels."""
    g = spec.graph
    for c in spec.labels:
        if c not in sys:
            raise MalformedGraph(f"boundary label {c} is not a color of p={sys.p}")
    if g.free_loops and not g.vertices:
        return len(sys.colors) ** g.free_loops
    if not g.vertices:
        # disk / annulus / sphere
        if len(spec.labels) == 0:
            return 1
        if len(spec.labels) == 1:
            return int(spec.labels[0] == 0)
        return int(spec.labels[0] == spec.labels[1])
    fixed = dict(zip(g.legs, spec.labels))
    free = [e for e in g.edges if e not in fixed]
    # order free edges so each vertex is checked as soon as it is complete
    order = []
    for v in g.vertices:
        for e in v:
            if e in free and e not in order:
                order.append(e)
    pos = {e: i for i, e in enumerate(order)}
    checks = [[] for _ in order]
    pre = []
    for v in g.vertices:
        last = max((pos[e] for e in v if e in pos), default=-1)
        (checks[last] if last >= 0 else pre).append(v)
    adm = _admissible_triples(sys.p)
    colors = sys.colors
    assign = dict(fixed)
    if any((assign[v[0]], assign[v[1]], assign[v[2]]) not in adm for v in pre):
        return 0

    def rec(i):
        if i == len(order):
            return 1
        e = order[i]
        total = 0
        for c in colors:
            assign[e] = c
            if all((assign[v[0]], assign[v[1]], assign[v[2]]) in adm for v in checks[i]):
                total += rec(i + 1)
        del assign[e]
        return total

    return rec(0)


def verlinde_dimension(genus: int, labels, sys: ColorSystem) -> int:
    """e_0^T (sum_a N_a N_a)^genus  prod_l N_l e_0 with exact integer matrices."""
    cols = sys.colors
    idx = {c: i for i, c in enumerate(cols)}
    N = _fusion(sys.p)
    k = len(cols)
    handle = sum((N[a] @ N[a] for a in range(k)), np.zeros((k, k), dtype=object))
    M = np.identity(k, dtype=object)
    for _ in range(genus):
        M = M @ handle
    for l in labels:
        if l not in idx:
            raise MalformedGraph(f"boundary label {l} is not a color of p={sys.p}")
        M = M @ N[idx[l]]
    return int(M[0, 0])


# Dehn twist eigenvalues and root equivalence ----------------------------------


def twist_eigenvalues(sys: ColorSystem, A: CyclotomicNumber) -> dict[int, CyclotomicNumber]:
    out = {}
    for i in sys.colors:
        lam = A ** (i * (i + 2))
        out[i] = -lam if (sys.p % 2 == 0 and i % 2) else lam
    return out


class Equivalence(enum.Enum):
    SAME = "Same"
    CONJUGATE = "Conjugate"
    INEQUIVALENT = "Inequivalent"


def _compatible_bijections(sys: ColorSystem, ev_a, ev_b):
    """Color bijections f with ev_a[i] == ev_b[f(i)] that respect block structure.

    Compatibility means the 4-holed sphere with all boundaries colored i
    has the same dimension as with all colored f(i); in the even theory also
    the pair of pants (1, 1, 2) stays admissible as (1, 1, f(2)).
    """
    cols = list(sys.colors)
    four = {c: verlinde_dimension(0, (c,) * 4, sys) for c in cols}
    choices = []
    for i in cols:
        choices.append([j for j in cols if ev_b[j] == ev_a[i] and four[j] == four[i]])
    found = []

    def rec(pos, used, f):
        if pos == len(cols):
            found.append(dict(f))
            return
        i = cols[pos]
        for j in choices[pos]:
            if j in used:
                continue
            f[i] = j
            rec(pos + 1, used | {j}, f)
            del f[i]

    rec(0, frozenset(), {})
    if sys.p % 2 == 0 and {1, 2} <= set(cols):
        pants = verlinde_dimension(0, (1, 1, 2), sys)
        found = [f for f in found if verlinde_dimension(0, (f[1], f[1], f[2]), sys) == pants]
    return found


def equivalent_roots(p: int, A: CyclotomicNumber, B: CyclotomicNumber) -> Equivalence:
    """Decide whether the representations at roots A and B are linearly
    equivalent (Same), anti-linearly equivalent (Conjugate) or neither."""
    sys = ColorSystem(p)
    ev_a = twist_eigenvalues(sys, A)
    ev_b = twist_eigenvalues(sys, B)
    ev_bc = {i: x.conj() for i, x in ev_b.items()}
    linear = _compatible_bijections(sys, ev_a, ev_b)
    anti = _compatible_bijections(sys, ev_a, ev_bc)
    if any(_fixes_low_colors(sys, f) for f in linear):
        return Equivalence.SAME
    if any(_fixes_low_colors(sys, f) for f in anti):
        return Equivalence.CONJUGATE
    return Equivalence.INEQUIVALENT


def _fixes_low_colors(sys: ColorSystem, f: dict[int, int]) -> bool:
    # Eigenvalue matching on the fixed colors then pins the root: A^8 = B^8
    # with both of order 2p, p odd, leaves only A = B among primitive roots.
    low = (0, 2) if sys.p % 2 else (0, 1, 2)
    return all(f[c] == c for c in low if c in f)
