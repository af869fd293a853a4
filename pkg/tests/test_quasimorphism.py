import functools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quantrep.errors import DegenerateTriple
from quantrep.quasimorphism import (
    IndefiniteModel,
    burau_model,
    cartan_arg,
    dupont_cocycle,
    rotation_number,
    word_quasimorphism,
)

H0 = np.diag([1.0, 1.0, -1.0]).astype(complex)
ORIGIN = np.array([0, 0, 1], dtype=complex)


cached_model = functools.cache(burau_model)


@pytest.fixture(scope="module")
def model7():
    return cached_model(7)


def ball_point(u, v):
    return np.array([u, v, 1], dtype=complex)


def test_cartan_arg_examples():
    x = ball_point(0.2, 0.1j)
    assert cartan_arg(x, x, x, H0) == pytest.approx(0.0, abs=1e-15)
    y, z = ball_point(-0.3, 0.2), ball_point(0.1j, -0.4)
    a = cartan_arg(x, y, z, H0)
    assert cartan_arg(y, x, z, H0) == pytest.approx(-a, abs=1e-14)
    assert cartan_arg(2 * x, 3.5 * y, z, H0) == pytest.approx(a, abs=1e-14)


def test_cartan_arg_on_a_complex_line_approaches_right_angle():
    values = []
    for r in (0.9, 0.99, 0.999, 0.9999):
        pts = [ball_point(r * np.exp(2j * math.pi * k / 3), 0) for k in range(3)]
        values.append(cartan_arg(*pts, H0))
    assert all(abs(b) > abs(a) for a, b in zip(values, values[1:]))
    assert abs(abs(values[-1]) - math.pi / 2) < 1e-3


def test_cartan_arg_rejects_positive_points():
    with pytest.raises(DegenerateTriple):
        cartan_arg(np.array([1, 0, 0]), ORIGIN, ORIGIN, H0)


def test_model_validation():
    with pytest.raises(ValueError):
        IndefiniteModel(np.eye(3), ORIGIN)
    with pytest.raises(ValueError):
        IndefiniteModel(H0, np.array([1, 0, 0]))


def test_trivial_cocycle_values(model7):
    g = model7.generators[0]
    ident = np.eye(3, dtype=complex)
    assert dupont_cocycle(ident, g, model7).value == pytest.approx(0, abs=1e-12)
    assert dupont_cocycle(g, np.linalg.inv(g), model7).value == pytest.approx(0, abs=1e-12)
    assert rotation_number(ident, model7).value == pytest.approx(0, abs=1e-12)
    assert rotation_number((), model7).value == 0
    with pytest.raises(ValueError):
        rotation_number(ident, model7, n_max=8)


def test_cocycle_rejects_non_isometries(model7):
    with pytest.raises(ValueError):
        dupont_cocycle(2 * np.eye(3), np.eye(3), model7)


def words(max_len=20):
    return st.lists(st.sampled_from([1, 2, 3, -1, -2, -3]), min_size=1, max_size=max_len)


def word_matrix(word, model):
    out = np.eye(3, dtype=complex)
    for s in word:
        g = model.generators[abs(s) - 1]
        out = out @ (g if s > 0 else np.linalg.inv(g))
    return out


@settings(max_examples=50, deadline=None)
@given(words(7), words(7), words(6))
def test_cocycle_identity(u, v, w):
    model = cached_model(7)
    g1, g2, g3 = (word_matrix(x, model) for x in (u, v, w))
    c = lambda a, b: dupont_cocycle(a, b, model, check=False).value
    res = c(g2, g3) - c(g1 @ g2, g3) + c(g1, g2 @ g3) - c(g1, g2)
    assert abs(res) < 1e-9


@settings(max_examples=100, deadline=None)
@given(words(), words())
def test_cocycle_bound(u, v):
    model = cached_model(7)
    c = dupont_cocycle(word_matrix(u, model), word_matrix(v, model), model, check=False)
    assert abs(c.value) <= model.bound + 1e-12


@settings(max_examples=30, deadline=None)
@given(words(8), words(8))
def test_prefix_sum_is_a_quasimorphism(u, v):
    model = cached_model(7)
    phi = lambda w: word_quasimorphism(w, model)
    defect = phi(u + v) - phi(u) - phi(v)
    expected = dupont_cocycle(word_matrix(u, model), word_matrix(v, model), model, check=False).value
    assert abs(defect - expected) < 1e-9


@pytest.mark.parametrize("word", [[1, 2, 2, -1, -3, 2], [3, 1, -2, -2, 1, 3], [1, 2, 3, 3]])
def test_basepoint_independence(model7, word):
    # inverse letters appended out of order: every exponent sum is zero
    w = list(word)
    w = w + [-s for s in w[::2]] + [-s for s in w[1::2]]
    other = model7.with_basepoint(model7.basepoint + 0.3 * np.array([1, 1j, 0]) / np.linalg.norm(model7.basepoint))
    a = rotation_number(w, model7).value
    b = rotation_number(w, other).value
    assert abs(a - b) < 1e-3


def test_homogeneity_and_conjugation(model7):
    g = [1, 2, -3, 2, 1]
    r = rotation_number(g, model7).value
    for m in (2, 3):
        assert abs(rotation_number(g * m, model7).value - m * r) < 1e-3
    h = [2, 3]
    conj = h + g + [-s for s in reversed(h)]
    assert abs(rotation_number(conj, model7).value - r) < 1e-3
