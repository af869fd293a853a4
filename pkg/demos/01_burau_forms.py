"""Burau matrices at a root of unity, their invariant Hermitian form, and its signatures.

Run:  python3 demos/01_burau_forms.py [p]
"""

import sys

from quantrep.burau import BurauParams
from quantrep.linalg import burnside_span, finite_order_test, invariant_hermitian_form
from quantrep.profile import group_profile


def main(p: int = 7) -> None:
    params = BurauParams.make(p, 4)
    print(f"p = {p}: A = {params.A}")
    print(f"Burau parameter q = {params.q}  (order {params.q.order})\n")

    g1, g2, g3 = params.generators()
    print("first generator:")
    for row in g1.rows:
        print("   ", [str(x) for x in row])
    print("braid relation g1 g2 g1 = g2 g1 g2:", g1 @ g2 @ g1 == g2 @ g1 @ g2)
    print("far commutation g1 g3 = g3 g1:   ", g1 @ g3 == g3 @ g1)

    H, dim = invariant_hermitian_form(params.generators())
    print(f"\ninvariant Hermitian forms: a {dim}-dimensional family; nondegenerate: {H.nondegenerate}")

    pure = params.pure_generators()
    span, irreducible = burnside_span(pure, 6)
    finite, _ = finite_order_test(pure[0] @ pure[1].inverse())
    print(f"pure braid image spans {span} dimensions of 3x3 matrices (irreducible: {irreducible})")
    print(f"A12 * A23^-1 has infinite order: {not finite}")

    print("\nsignature of the form at each pair of complex embeddings:")
    prof = group_profile(p)
    for f in prof.factors:
        kind = "compact" if f.compact else "indefinite"
        print(f"   zeta -> zeta^{f.embedding.exponent}: {f.signature}  {kind}")
    print(f"non-compact factors: {prof.noncompact_count} of {len(prof.factors)}")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 7)
