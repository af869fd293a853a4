"""Acceptance criteria.  Each test prints one PASS/FAIL line (also summarized at the end of the run)."""

import itertools
import math
import resource
import time

import numpy as np
import pytest

from quantrep.blocks import (
    BlockSpec,
    ColorSystem,
    Equivalence,
    block_dimension,
    equivalent_roots,
    standard_graphs,
    verlinde_dimension,
)
from quantrep.burau import BurauParams, burau_generators, q_of
from quantrep.cyclotomic import CyclotomicNumber, make_root, residue_contexts
from quantrep.linalg import RepMatrix, burnside_span, finite_order_test, invariant_hermitian_form
from quantrep.profile import group_profile
from quantrep.quasimorphism import burau_model, dupont_cocycle, rotation_number
from quantrep.quotients import (
    cayley_gap,
    contexts_for,
    group_closure,
    lift_check,
    reduce_generator_set,
    usable_primes,
)


def primitive_roots(p):
    n = 2 * p
    return [make_root(n, k) for k in range(1, n) if math.gcd(k, n) == 1]


def test_criterion_01_braid_relations(criterion):
    params = [q_of(5, make_root(10, 1)), q_of(7, make_root(14, 3)), q_of(11, make_root(22, 1)),
              q_of(6, make_root(12, 5)), make_root(9, 2)]
    t0 = time.perf_counter()
    failures = 0
    for q in params:
        for n in range(3, 7):
            g = burau_generators(n, q)
            for i, j in itertools.combinations(range(n - 1), 2):
                if j == i + 1:
                    failures += g[i] @ g[j] @ g[i] != g[j] @ g[i] @ g[j]
                else:
                    failures += g[i] @ g[j] != g[j] @ g[i]
    elapsed = time.perf_counter() - t0
    criterion(1, failures == 0 and elapsed < 1.0,
              f"braid relations n=3..6 at 5 parameters: {failures} failures, {elapsed:.2f}s")


def test_criterion_02_invariant_form(criterion):
    t0 = time.perf_counter()
    bad = []
    for p in (7, 11):
        for A in primitive_roots(p):
            H, dim = invariant_hermitian_form(BurauParams.make(p, 4, A=A).generators())
            if dim != 1 or not H.nondegenerate:
                bad.append((p, A))
    elapsed = time.perf_counter() - t0
    criterion(2, not bad and elapsed < 30, f"form space dim 1, nondegenerate for every root, p=7,11: "
                                           f"{len(bad)} exceptions, {elapsed:.1f}s")


def test_criterion_03_signature_profile(criterion):
    t0 = time.perf_counter()
    prof = group_profile(7)
    elapsed = time.perf_counter() - t0
    sigs = [f.signature for f in prof.factors]
    allowed = all(s in ((3, 0), (0, 3), (2, 1), (1, 2)) for s in sigs)
    both = any(f.compact for f in prof.factors) and prof.noncompact_count >= 1
    criterion(3, len(sigs) == 3 and allowed and both and elapsed < 30,
              f"p=7 signatures {sigs}, n(p)={prof.noncompact_count}, {elapsed:.1f}s")


def test_criterion_04_dimension_table(criterion):
    t0 = time.perf_counter()
    checks = []

    def dim(p, labels):
        return block_dimension(BlockSpec(0, labels), ColorSystem(p))

    for p in (7, 9, 11, 13):
        checks.append(dim(p, (2, 2, 2, 2)) == 3)
    for p in (8, 10, 12, 14):
        checks.append(dim(p, (1, 1, 1, 1)) == 2)
        checks.append(dim(p, (1, 1, 2)) == 1)
    for p in (12, 16, 20, 24):
        r = (p - 2) // 2
        for f in ColorSystem(p).colors:
            if 2 * f <= r - 1:
                checks.append(dim(p, (f,) * 4) == f + 1)
    elapsed = time.perf_counter() - t0
    criterion(4, all(checks) and elapsed < 1.0,
              f"stated block dimensions: {sum(checks)}/{len(checks)} match, {elapsed:.2f}s")


def test_criterion_05_oracle_equivalence(criterion):
    t0 = time.perf_counter()
    mismatches, cases = 0, 0
    for p in (5, 7, 11, 13):
        sys_ = ColorSystem(p)
        for genus in range(5):
            oracle = verlinde_dimension(genus, (), sys_)
            for graph in standard_graphs(genus, 0):
                cases += 1
                mismatches += block_dimension(BlockSpec(genus, (), graph), sys_) != oracle
        for n in range(7):
            graphs = standard_graphs(0, n)
            for labels in itertools.product(sys_.colors, repeat=n):
                oracle = verlinde_dimension(0, labels, sys_)
                for graph in graphs:
                    cases += 1
                    mismatches += block_dimension(BlockSpec(0, labels, graph), sys_) != oracle
    elapsed = time.perf_counter() - t0
    criterion(5, mismatches == 0 and elapsed < 120,
              f"coloring count vs transfer matrix on 2 graphs per surface: {mismatches}/{cases} mismatches, "
              f"{elapsed:.1f}s")


def test_criterion_06_root_equivalence(criterion):
    t0 = time.perf_counter()
    wrong, total = 0, 0
    for p in (5, 7, 11):
        roots = primitive_roots(p)
        for A, B in itertools.product(roots, repeat=2):
            expected = (Equivalence.SAME if A == B else
                        Equivalence.CONJUGATE if A == B.conj() else Equivalence.INEQUIVALENT)
            total += 1
            wrong += equivalent_roots(p, A, B) is not expected
    elapsed = time.perf_counter() - t0
    criterion(6, wrong == 0 and elapsed < 10, f"equivalence table p=5,7,11: {wrong}/{total} wrong, {elapsed:.1f}s")


def test_criterion_07_density_prerequisites(criterion):
    t0 = time.perf_counter()
    bad = []
    for p in (5, 7, 11):
        for A in primitive_roots(p):
            pure = BurauParams.make(p, 4, A=A).pure_generators()
            span = burnside_span(pure, 6)
            finite, _ = finite_order_test(pure[0] @ pure[1].inverse())
            if span != (9, True) or finite:
                bad.append((p, A, span, finite))
    elapsed = time.perf_counter() - t0
    criterion(7, not bad and elapsed < 60,
              f"span 9 and an infinite-order element for all roots, p=5,7,11: {len(bad)} exceptions, {elapsed:.1f}s")


@pytest.fixture(scope="module")
def b3_sweep():
    gens = BurauParams.make(7, 3).generators()
    out = []
    for q, ctx, target in usable_primes(gens, True, 200_000, 6):
        t0 = time.perf_counter()
        rgs = reduce_generator_set(gens, ctx, 1, True)
        rep = group_closure(rgs)
        out.append((q, rgs, rep, time.perf_counter() - t0))
    return out


@pytest.mark.slow
def test_criterion_08_strong_approximation(criterion, b3_sweep):
    gens = BurauParams.make(7, 4).pure_generators()
    rgs = reduce_generator_set(gens, contexts_for(gens, 2)[0], 1, True)
    t0 = time.perf_counter()
    rep = group_closure(rgs, 20_000_000, keep_keys=False)
    elapsed = time.perf_counter() - t0
    peak_gb = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1e6
    flagship = rep.verdict == "Full" and rep.state_count <= 20_000_000 and elapsed < 600 and peak_gb < 4
    full = [q for q, _, r, t in b3_sweep if r.verdict == "Full" and t < 60]
    criterion(8, flagship and len(full) >= 5,
              f"PB_4 mod 2: {rep.verdict} order {rep.order}/{rep.target_order}, {elapsed:.0f}s, "
              f"peak {peak_gb:.2f} GB; B_3 sweep Full at q={full}")


def test_criterion_09_prime_power_lift(criterion):
    gens = BurauParams.make(7, 3).generators()
    ctx = contexts_for(gens, 13)[0]
    t0 = time.perf_counter()
    base = group_closure(reduce_generator_set(gens, ctx, 1, True), keep_keys=False)
    lifted_rgs = reduce_generator_set(gens, ctx, 2, True)
    lifted = group_closure(lifted_rgs, keep_keys=False)
    rep = lift_check(base, lifted, lifted_rgs)
    elapsed = time.perf_counter() - t0
    criterion(9, rep.verdict == "Full" and rep.ratio == 13 ** 3 and elapsed < 300,
              f"B_3 p=7 q=13 k=2: ratio {rep.ratio} (predicted {rep.predicted}), {rep.verdict}, {elapsed:.0f}s")


def test_criterion_10_expander_suite(criterion, b3_sweep):
    t0 = time.perf_counter()
    gaps = {}
    for q, rgs, rep, _ in b3_sweep:
        if rep.verdict == "Full":
            gaps[q] = cayley_gap(rgs, rep, seed=0).gap
    ok_gaps = len(gaps) >= 5 and all(g > 1e-3 for g in gaps.values())
    calib = []
    for q in (101, 3907):
        gen = RepMatrix([[CyclotomicNumber.rational(1, 2)]], 1)
        rgs = reduce_generator_set([gen], residue_contexts(1, q)[0])
        rep = group_closure(rgs)
        calib.append(abs(cayley_gap(rgs, rep).lambda2 - math.cos(2 * math.pi / rep.order)))
    elapsed = time.perf_counter() - t0
    shown = ", ".join(f"{q}:{g:.4f}" for q, g in gaps.items())
    criterion(10, ok_gaps and max(calib) < 1e-9 and elapsed < 300,
              f"gaps {{{shown}}}; cyclic calibration error {max(calib):.1e}; {elapsed:.0f}s")


def _random_word(rng, lo, hi):
    return [int(s) for s in rng.choice([1, 2, 3, -1, -2, -3], int(rng.integers(lo, hi + 1)))]


def _matrix(word, model):
    out = np.eye(3, dtype=complex)
    for s in word:
        g = model.generators[abs(s) - 1]
        out = out @ (g if s > 0 else np.linalg.inv(g))
    return out


@pytest.mark.slow
def test_criterion_11_quasimorphism_suite(criterion):
    rng = np.random.default_rng(11)
    t0 = time.perf_counter()
    worst_identity, worst_bound_excess, worst_hom, worst_conj = 0.0, -1.0, 0.0, 0.0
    classes, failures = [], []
    for p in (5, 7, 11):
        for factor in group_profile(p).factors:
            if factor.compact:
                continue
            model = burau_model(p, factor.embedding.exponent)
            classes.append((p, factor.embedding.exponent))
            c = lambda a, b: dupont_cocycle(a, b, model, check=False).value
            for _ in range(100):
                g1, g2, g3 = (_matrix(_random_word(rng, 1, 20), model) for _ in range(3))
                res = abs(c(g2, g3) - c(g1 @ g2, g3) + c(g1, g2 @ g3) - c(g1, g2))
                worst_identity = max(worst_identity, res)
            for _ in range(10_000 // 6 + 1):
                a, b = (_matrix(_random_word(rng, 1, 20), model) for _ in range(2))
                worst_bound_excess = max(worst_bound_excess, abs(c(a, b)) - model.bound)
            for _ in range(20):
                w = _random_word(rng, 3, 8)
                h = _random_word(rng, 1, 3)
                try:
                    r = rotation_number(w, model).value
                    for m in (2, 3):
                        worst_hom = max(worst_hom, abs(rotation_number(w * m, model).value - m * r))
                    conj = h + w + [-s for s in reversed(h)]
                    worst_conj = max(worst_conj, abs(rotation_number(conj, model).value - r))
                except Exception as exc:  # a non-converging word counts against the criterion
                    failures.append((p, w, repr(exc)))
    elapsed = time.perf_counter() - t0
    ok = (worst_identity < 1e-9 and worst_bound_excess <= 0 and worst_hom < 1e-3 and worst_conj < 1e-3
          and not failures and elapsed < 600)
    criterion(11, ok, f"classes {classes}: cocycle residual {worst_identity:.1e}, "
                      f"bound margin {-worst_bound_excess:.3f}, homogeneity {worst_hom:.1e}, "
                      f"conjugation {worst_conj:.1e}, {len(failures)} non-converging, {elapsed:.0f}s")
