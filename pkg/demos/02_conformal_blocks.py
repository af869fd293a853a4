"""Counting conformal blocks two ways, and telling roots of unity apart by twist eigenvalues."""

import math

from quantrep.blocks import (
    BlockSpec,
    ColorSystem,
    block_dimension,
    equivalent_roots,
    standard_graphs,
    verlinde_dimension,
)
from quantrep.cyclotomic import make_root

for p in (5, 7, 8):
    sys_ = ColorSystem(p)
    print(f"p = {p} ({sys_.parity}): colors {sys_.colors}")

print("\nfour-holed sphere, every boundary colored 2:")
for p in (5, 7, 11):
    print(f"   p = {p}: {block_dimension(BlockSpec(0, (2, 2, 2, 2)), ColorSystem(p))}")

print("\nclosed surfaces, coloring count on two pants decompositions vs transfer matrix:")
for p in (5, 7):
    sys_ = ColorSystem(p)
    for genus in range(1, 5):
        counts = [block_dimension(BlockSpec(genus, (), g), sys_) for g in standard_graphs(genus, 0)]
        print(f"   p = {p}, genus {genus}: graphs {counts}, transfer matrix {verlinde_dimension(genus, (), sys_)}")

p = 7
exps = [k for k in range(1, 2 * p) if math.gcd(k, 2 * p) == 1]
print(f"\nroot equivalence at p = {p} (rows A = zeta^a, columns B = zeta^b):")
print("      " + "".join(f"{b:>4}" for b in exps))
for a in exps:
    row = [equivalent_roots(p, make_root(2 * p, a), make_root(2 * p, b)).value[0] for b in exps]
    print(f"   {a:>2} " + "".join(f"{c:>4}" for c in row))
print("S = same, C = complex conjugate, I = inequivalent")
