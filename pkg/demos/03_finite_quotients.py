"""Reducing the Burau image modulo primes: closure orders against predicted group orders, then spectral gaps.

Pass --flagship to also enumerate the 3x3 pure braid image over F_8 (about 1.6e7 states, a few minutes).
"""

import sys
import time

from quantrep.burau import BurauParams
from quantrep.quotients import (
    cayley_gap,
    contexts_for,
    group_closure,
    lift_check,
    reduce_generator_set,
    usable_primes,
)

gens = BurauParams.make(7, 3).generators()
print("2x2 Burau image at p = 7, projectively reduced mod q:")
print(f"{'q':>4} {'field':>6} {'type':>8} {'order':>8} {'target':>8} {'verdict':>8} {'gap':>8}")
for q, ctx, target in usable_primes(gens, True, 200_000, 6):
    rgs = reduce_generator_set(gens, ctx, 1, True)
    rep = group_closure(rgs)
    gap = cayley_gap(rgs, rep).gap
    kind = "unitary" if ctx.conjugation_descends else "linear"
    print(f"{q:>4} {ctx.field_size:>6} {kind:>8} {rep.order:>8} {rep.target_order:>8} {rep.verdict:>8} {gap:>8.4f}")

ctx = contexts_for(gens, 13)[0]
base = group_closure(reduce_generator_set(gens, ctx, 1, True), keep_keys=False)
lifted_rgs = reduce_generator_set(gens, ctx, 2, True)
t0 = time.perf_counter()
lifted = group_closure(lifted_rgs, keep_keys=False)
lift = lift_check(base, lifted, lifted_rgs)
print(f"\nmod 13^2: order {lift.order_qk} = {lift.order_q} x {lift.ratio} "
      f"(expected factor {lift.predicted}): {lift.verdict}  [{time.perf_counter() - t0:.0f}s]")

if "--flagship" in sys.argv:
    pure = BurauParams.make(7, 4).pure_generators()
    rgs = reduce_generator_set(pure, contexts_for(pure, 2)[0], 1, True)
    t0 = time.perf_counter()
    rep = group_closure(rgs, keep_keys=False)
    print(f"\n3x3 pure braid image mod 2 (field F_8, unitary type): order {rep.order}, "
          f"target {rep.target_order}, {rep.verdict}  [{time.perf_counter() - t0:.0f}s]")
