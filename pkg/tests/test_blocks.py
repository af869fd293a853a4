import itertools

import pytest
from hypothesis import given, settings, strategies as st

from quantrep.blocks import (
    BlockSpec,
    ColorSystem,
    Equivalence,
    TrivalentGraph,
    admissible,
    block_dimension,
    chain_graph,
    equivalent_roots,
    necklace_graph,
    standard_graphs,
    twist_eigenvalues,
    verlinde_dimension,
)
from quantrep.cyclotomic import make_root
from quantrep.errors import MalformedGraph


def dim(p, genus, labels, graph=None):
    return block_dimension(BlockSpec(genus, labels, graph), ColorSystem(p))


def test_color_systems():
    assert ColorSystem(5).colors == (0, 2)
    assert ColorSystem(7).colors == (0, 2, 4)
    assert ColorSystem(8).colors == (0, 1, 2)
    assert ColorSystem(7).parity == "odd" and ColorSystem(6).parity == "even"


def test_admissibility_examples():
    assert admissible(1, 1, 2, ColorSystem(6))
    assert not admissible(1, 1, 1, ColorSystem(8))
    assert not admissible(2, 2, 4, ColorSystem(5))
    assert admissible(2, 2, 4, ColorSystem(7))


def test_small_surface_dimensions():
    assert dim(7, 0, (0, 0, 0)) == 1
    assert dim(8, 0, (1, 1, 2)) == 1
    assert dim(5, 1, ()) == 2
    assert dim(5, 1, (0,)) == 2
    assert dim(5, 2, ()) == 5
    assert dim(7, 0, (4, 2, 2, 2, 2)) >= 3


@pytest.mark.parametrize("p", [7, 11, 13])
def test_four_holed_sphere_colored_two(p):
    assert dim(p, 0, (2, 2, 2, 2)) == 3
    assert dim(5, 0, (2, 2, 2, 2)) == 2


@pytest.mark.parametrize("p", [8, 10, 12, 16, 20])
def test_even_four_holed_sphere(p):
    sys = ColorSystem(p)
    r = (p - 2) // 2
    assert dim(p, 0, (1, 1, 1, 1)) == 2
    for f in sys.colors:
        top = min(2 * f, r - 1, 2 * (p - 2) - 2 * f)
        assert dim(p, 0, (f,) * 4) == top // 2 + 1
        if 2 * f <= r - 1:
            assert dim(p, 0, (f,) * 4) == f + 1


def test_genus_three_agrees_across_graphs():
    values = {dim(5, 3, (), g) for g in standard_graphs(3, 0)}
    assert values == {verlinde_dimension(3, (), ColorSystem(5))}


def test_malformed_graphs():
    with pytest.raises(MalformedGraph):
        BlockSpec(0, (0, 0, 0), TrivalentGraph([(0, 1)], [0, 1, 2]))
    with pytest.raises(MalformedGraph):
        BlockSpec(0, (0, 0, 0, 0), chain_graph(0, 3))
    with pytest.raises(MalformedGraph):
        # a genus-1 graph offered for a sphere
        BlockSpec(0, (0,), chain_graph(1, 1))
    with pytest.raises(MalformedGraph):
        dim(5, 0, (4, 0, 4))


def test_twist_eigenvalue_examples():
    A = make_root(10, 1)
    ev = twist_eigenvalues(ColorSystem(5), A)
    assert ev[0].is_one() and ev[2] == A ** 8
    B = make_root(12, 1)
    assert twist_eigenvalues(ColorSystem(6), B)[1] == -(B ** 3)


def primitive_roots(p):
    n = 2 * p
    return [make_root(n, k) for k in range(1, n) if k % 2 and k % p]


@pytest.mark.parametrize("p", [5, 7, 11])
def test_twist_eigenvalues_conjugate_and_distinct(p):
    sys = ColorSystem(p)
    for A in primitive_roots(p):
        ev = twist_eigenvalues(sys, A)
        evc = twist_eigenvalues(sys, A.conj())
        assert all(evc[i] == ev[i].conj() for i in sys.colors)
        assert len(set(ev.values())) == len(sys.colors)


def test_equivalence_examples():
    A = make_root(14, 1)
    assert equivalent_roots(7, A, A) is Equivalence.SAME
    assert equivalent_roots(7, A, A.conj()) is Equivalence.CONJUGATE
    assert equivalent_roots(7, A, make_root(14, 3)) is Equivalence.INEQUIVALENT


surfaces = st.one_of(
    st.tuples(st.sampled_from([5, 7, 9, 11, 13, 4, 6]), st.integers(0, 3), st.integers(0, 4)),
    st.tuples(st.sampled_from([8, 10, 12]), st.just(0), st.integers(0, 4)),
)


@settings(max_examples=40, deadline=None)
@given(surfaces, st.data())
def test_decomposition_independence(surface, data):
    p, genus, n = surface
    sys = ColorSystem(p)
    labels = tuple(data.draw(st.lists(st.sampled_from(sys.colors), min_size=n, max_size=n)))
    values = {block_dimension(BlockSpec(genus, labels, g), sys) for g in standard_graphs(genus, n)}
    assert len(values) == 1
    assert values == {verlinde_dimension(genus, labels, sys)}


def test_necklace_differs_from_chain_in_shape():
    c, k = chain_graph(2, 2), necklace_graph(2, 2)
    assert sorted(map(sorted, c.vertices)) != sorted(map(sorted, k.vertices))
