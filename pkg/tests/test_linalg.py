import itertools

import pytest
from hypothesis import given, settings, strategies as st

from quantrep.burau import BurauParams, burau_generators, q_of, standard_root
from quantrep.cyclotomic import CyclotomicNumber, make_root
from quantrep.errors import NoInvariantForm
from quantrep.linalg import (
    HermitianForm,
    RepMatrix,
    burnside_span,
    finite_order_test,
    invariant_hermitian_form,
    order_bound,
    rational_nullspace,
)


def cyc(v, n=7):
    return CyclotomicNumber.rational(n, v)


def test_rational_nullspace_small_system():
    basis = rational_nullspace([[1, 2, 3], [2, 4, 6]], 3)
    assert len(basis) == 2
    for v in basis:
        assert v[0] + 2 * v[1] + 3 * v[2] == 0


def test_identity_admits_the_full_hermitian_space():
    _, dim = invariant_hermitian_form([RepMatrix.identity(3, 7)])
    assert dim == 9


def test_unipotent_forms_are_isotropic_on_the_fixed_line():
    # invariant forms of [[1,1],[0,1]] are [[0,b],[-b,c]] with b imaginary
    u = RepMatrix([[cyc(1), cyc(1)], [cyc(0), cyc(1)]], 7)
    H, dim = invariant_hermitian_form([u])
    assert dim == 2
    assert H.is_invariant_under(u)
    assert H[0, 0].is_zero()


def test_expanding_element_leaves_only_degenerate_forms():
    H, dim = invariant_hermitian_form([RepMatrix.diagonal([cyc(2), cyc(1)])])
    assert dim == 1 and not H.nondegenerate


def test_no_form_at_all():
    with pytest.raises(NoInvariantForm):
        invariant_hermitian_form([RepMatrix.diagonal([cyc(2), cyc(3)])])


def test_burau_b4_form_at_p7():
    params = BurauParams.make(7, 4)
    H, dim = invariant_hermitian_form(params.generators())
    assert dim == 1 and H.nondegenerate
    assert all(H.is_invariant_under(g) for g in params.generators())
    assert all(H.is_invariant_under(g) for g in params.pure_generators())


def test_hermitian_form_rejects_non_hermitian():
    z = make_root(7, 1)
    with pytest.raises(ValueError):
        HermitianForm([[cyc(1), z], [z, cyc(1)]], 7)


def test_burnside_span_examples():
    assert burnside_span([RepMatrix.identity(3, 7)], 4) == (1, False)
    scalar = RepMatrix.diagonal([make_root(7, 1)] * 3)
    assert burnside_span([scalar], 4)[0] == 1
    gens = BurauParams.make(7, 4).generators()
    assert burnside_span(gens, 6) == (9, True)


def test_finite_order_examples():
    assert finite_order_test(RepMatrix.identity(3, 7)) == (True, 1)
    assert finite_order_test(RepMatrix.diagonal([make_root(7, 1), cyc(1), cyc(1)])) == (True, 7)
    g = BurauParams.make(7, 4).generators()
    assert finite_order_test(g[0] @ g[1].inverse()) == (False, None)
    # a single Burau generator at a root of unity has finite order 2p here
    finite, order = finite_order_test(g[0])
    assert finite and order == 14 and (g[0] ** 14).is_identity()


def test_order_bound_is_divisible_by_small_orders():
    M = order_bound(3, 7)
    assert all(M % m == 0 for m in (1, 2, 3, 4, 6, 7, 14, 9, 18))


@st.composite
def small_matrices(draw, n=2, order=5):
    entries = [
        CyclotomicNumber(order, draw(st.lists(st.integers(-3, 3), min_size=4, max_size=4)))
        for _ in range(n * n)
    ]
    return RepMatrix([entries[i * n:(i + 1) * n] for i in range(n)], order)


@settings(max_examples=40, deadline=None)
@given(small_matrices(), small_matrices(), small_matrices())
def test_matrix_product_is_associative_and_det_multiplicative(a, b, c):
    assert (a @ b) @ c == a @ (b @ c)
    assert (a @ b).det() == a.det() * b.det()
    ident = RepMatrix.identity(2, 5)
    assert a @ ident == a and ident @ a == a
    if not a.det().is_zero():
        assert (a @ a.inverse()).is_identity()


@pytest.mark.parametrize("p", [5, 7, 11])
def test_forms_exist_at_every_primitive_root(p):
    n = 2 * p
    for k in range(1, n):
        if k % 2 == 0 or k % p == 0:
            continue
        A = make_root(n, k)
        H, dim = invariant_hermitian_form(burau_generators(4, q_of(p, A)))
        assert dim == 1 and H.nondegenerate
