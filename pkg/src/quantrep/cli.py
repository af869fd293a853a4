"""Command-line entry point; every command writes JSON lines.

Each record carries ``schema_version`` and ``command``.  Exit status is 0 on
success, 2 on invalid input and 3 when a state, spectral or precision budget
runs out.  Timing fields are only emitted with ``--timing`` so that reruns are
byte-identical.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from .blocks import BlockSpec, ColorSystem, block_dimension, equivalent_roots, verlinde_dimension
from .burau import BurauParams, parse_word
from .cyclotomic import make_root
from .errors import (
    BudgetExceeded,
    DegenerateTriple,
    MalformedGraph,
    NonConvergent,
    PrecisionExhausted,
    SpectralBudgetExceeded,
)
from .profile import group_profile

SCHEMA_VERSION = 1
EXIT_OK, EXIT_INVALID, EXIT_BUDGET = 0, 2, 3


class UsageError(ValueError):
    pass


def _int_list(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(t) for t in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quantrep", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, required=True)
    common.add_argument("--out", default="-", help="output file (default stdout)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--timing", action="store_true", help="include wall-clock fields")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("signatures", parents=[common], help="signature profile of the Burau form")
    s.add_argument("--root-exponent", type=int)
    s.add_argument("--precision", type=int, default=30)

    b = sub.add_parser("blocks", parents=[common], help="conformal-block dimensions")
    b.add_argument("--genus", type=int, default=0)
    b.add_argument("--labels", type=_int_list, default=[])

    sub.add_parser("equiv", parents=[common], help="pairwise root-equivalence table")

    for name in ("reduce", "gap"):
        r = sub.add_parser(name, parents=[common], help="finite quotient closure" if name == "reduce" else "Cayley spectral gap")
        r.add_argument("--strands", type=int, default=4)
        r.add_argument("--root-exponent", type=int)
        r.add_argument("--q", type=_int_list, required=True)
        r.add_argument("--k", type=int, default=1)
        r.add_argument("--projective", action="store_true")
        r.add_argument("--generators", choices=("auto", "braid", "pure"), default="auto")
        r.add_argument("--state-budget", type=int, default=20_000_000)
        if name == "gap":
            r.add_argument("--spectral-budget", type=int, default=200_000)

    qz = sub.add_parser("quasi", parents=[common], help="rotation number of a braid word")
    qz.add_argument("--word", required=True)
    qz.add_argument("--strands", type=int, default=4)
    qz.add_argument("--root-exponent", type=int)
    qz.add_argument("--class-exponent", type=int, help="embedding exponent (default: first indefinite class)")
    qz.add_argument("--n-max", type=int, default=4096)
    return parser


def _record(command: str, **fields) -> dict:
    return {"schema_version": SCHEMA_VERSION, "command": command, **fields}


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    raise TypeError(f"not serializable: {type(x)!r}")


# commands ------------------------------------------------------------------------


def cmd_signatures(args) -> list[dict]:
    prof = group_profile(args.p, root_exponent=args.root_exponent, precision=args.precision)
    out = [
        _record("signatures", p=args.p, exponent=f.embedding.exponent, signature=list(f.signature), compact=f.compact)
        for f in prof.factors
    ]
    out.append(_record("signatures", p=args.p, factors=len(prof.factors), noncompact=prof.noncompact_count))
    return out


def cmd_blocks(args) -> list[dict]:
    sys_ = ColorSystem(args.p)
    spec = BlockSpec(args.genus, tuple(args.labels))
    bd = block_dimension(spec, sys_)
    vd = verlinde_dimension(args.genus, args.labels, sys_)
    return [_record("blocks", p=args.p, genus=args.genus, labels=list(args.labels), graph=spec.graph.name,
                    block_dimension=bd, verlinde_dimension=vd, agree=bd == vd)]


def cmd_equiv(args) -> list[dict]:
    n = 2 * args.p
    exps = [k for k in range(1, n) if math.gcd(k, n) == 1]
    roots = {k: make_root(n, k) for k in exps}
    out = []
    for a in exps:
        for b in exps:
            verdict = equivalent_roots(args.p, roots[a], roots[b])
            out.append(_record("equiv", p=args.p, a=a, b=b, verdict=verdict.value))
    return out


def _generators(args):
    params = BurauParams.make(args.p, args.strands, root_exponent=args.root_exponent)
    kind = args.generators
    if kind == "auto":
        kind = "pure" if args.strands >= 4 else "braid"
    return params.pure_generators() if kind == "pure" else params.generators(), kind


def _closure_job(payload):
    from .quotients import cayley_gap, contexts_for, group_closure, lift_check, reduce_generator_set

    args, q, with_gap = payload
    gens, kind = _generators(args)
    ctx = contexts_for(gens, q)[0]
    base = dict(p=args.p, strands=args.strands, generators=kind, q=q, k=args.k, projective=args.projective,
                residue_degree=ctx.degree, unitary=ctx.conjugation_descends)
    rgs = reduce_generator_set(gens, ctx, args.k, args.projective)
    target = None
    if rgs.dim in (2, 3):
        from .quotients import target_order

        target = target_order(rgs.dim, ctx, args.projective, rgs.determinant_image_order(), args.k)
        if target > args.state_budget:
            raise BudgetExceeded(f"q={q}: predicted order {target} exceeds state budget {args.state_budget}")
    rep = group_closure(rgs, args.state_budget, target, keep_keys=with_gap)
    rec = dict(base, order=rep.order, target_order=rep.target_order, verdict=rep.verdict,
               truncated=rep.truncated, state_count=rep.state_count)
    if args.k > 1:
        rgs1 = reduce_generator_set(gens, ctx, 1, args.projective)
        rep1 = group_closure(rgs1, args.state_budget, keep_keys=False)
        lift = lift_check(rep1, rep, rgs)
        rec["lift"] = dict(order_q=lift.order_q, ratio=lift.ratio, predicted=lift.predicted, verdict=lift.verdict)
    if args.timing:
        rec["wall_time"] = round(rep.wall_time, 3)
    if with_gap:
        if rep.truncated:
            raise BudgetExceeded("closure truncated; no spectral gap")
        gap = cayley_gap(rgs, rep, args.spectral_budget, args.seed)
        rec.update(lambda2=round(gap.lambda2, 9), gap=round(gap.gap, 9), generator_count=gap.generator_count,
                   residual_ok=gap.residual < 1e-8)
    return rec


def _closures(args, command: str) -> list[dict]:
    if args.k < 1:
        raise UsageError("--k must be at least 1")
    if args.strands < 3:
        raise UsageError("--strands must be at least 3")
    with_gap = command == "gap"
    payloads = [(args, q, with_gap) for q in args.q]
    if args.jobs > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_closure_job, payloads))
    else:
        results = [_closure_job(pl) for pl in payloads]
    return [_record(command, **r) for r in results]


def cmd_quasi(args) -> list[dict]:
    from .quasimorphism import burau_model, rotation_number

    word = parse_word(args.word)
    if any(abs(s) >= args.strands for s in word):
        raise UsageError(f"word uses a generator outside B_{args.strands}")
    try:
        model = burau_model(args.p, args.class_exponent, args.strands, root_exponent=args.root_exponent)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rep = rotation_number(word, model, args.n_max)
    return [_record("quasi", p=args.p, word=args.word, n_max=args.n_max, rotation=round(rep.value, 9),
                    last_delta=round(rep.deltas[-1], 12) if rep.deltas else 0.0, bound=model.bound)]


COMMANDS = {
    "signatures": cmd_signatures,
    "blocks": cmd_blocks,
    "equiv": cmd_equiv,
    "reduce": lambda a: _closures(a, "reduce"),
    "gap": lambda a: _closures(a, "gap"),
    "quasi": cmd_quasi,
}


def run(argv=None, stdout=None) -> int:
    parser = build_parser()
    stdout = stdout or sys.stdout
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    try:
        records = COMMANDS[args.command](args)
    except (UsageError, MalformedGraph, DegenerateTriple, ValueError, ZeroDivisionError) as exc:
        print(f"quantrep: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (BudgetExceeded, SpectralBudgetExceeded, PrecisionExhausted, NonConvergent) as exc:
        print(f"quantrep: budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    text = "".join(json.dumps(r, sort_keys=True, default=_jsonable) + "\n" for r in records)
    if args.out == "-":
        stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
