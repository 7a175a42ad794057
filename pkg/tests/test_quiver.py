import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from motivic_dt.quiver import (
    Arrow,
    Potential,
    Quiver,
    QuiverError,
    a2_quiver,
    antisym_form,
    canonical_rotation,
    cut_weight,
    cyclic_derivative,
    dim_vectors,
    euler_form,
    loop_quiver,
    rep_space_weight,
    validate_cut,
)

from conftest import QUIVERS

COMMUTATOR = ((1, ("x", "y", "z")), (-1, ("y", "x", "z")))


def test_euler_form_examples():
    assert euler_form(loop_quiver(3), (1,), (1,)) == -2
    Q = a2_quiver()
    assert euler_form(Q, (1, 0), (0, 1)) == -1
    assert euler_form(Q, (0, 1), (1, 0)) == 0
    assert euler_form(Q, (3, 2), (0, 0)) == 0
    with pytest.raises(QuiverError):
        euler_form(Q, (1,), (1, 0))


def test_quiver_validation():
    with pytest.raises(QuiverError):
        Quiver(("a", "a"))
    with pytest.raises(QuiverError):
        Quiver(("a",), (Arrow("x", "a", "b"),))
    with pytest.raises(QuiverError):
        Quiver(("a",), (Arrow("x", "a", "a"), Arrow("x", "a", "a")))
    with pytest.raises(QuiverError):
        a2_quiver().check_dim((1, -1))


def test_dim_vectors_order():
    vecs = dim_vectors(2, 2)
    assert vecs == [(0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (2, 0)]


def test_weights():
    Q = loop_quiver(3)
    assert rep_space_weight(Q, (2,)) == 12
    assert cut_weight(Q, ["z"], (2,)) == 4


def test_cyclic_derivative_examples():
    Q = loop_quiver(3)
    W = Potential(Q, COMMUTATOR)
    assert cyclic_derivative(W, "x") == [(1, ("y", "z")), (-1, ("z", "y"))]
    assert cyclic_derivative(W, "z") == [(1, ("x", "y")), (-1, ("y", "x"))]
    cube = Potential(loop_quiver(1), ((1, ("x", "x", "x")),))
    assert cyclic_derivative(cube, "x") == [(3, ("x", "x"))]
    with pytest.raises(QuiverError):
        cyclic_derivative(W, "w")


def test_cut_examples():
    Q = loop_quiver(3)
    W = Potential(Q, COMMUTATOR)
    assert validate_cut(W, {"z"})
    assert not validate_cut(W, {"x", "z"})
    assert validate_cut(Potential.zero(Q), set())


def test_potential_merges_rotations():
    Q = loop_quiver(3)
    W = Potential(Q, ((1, ("y", "z", "x")), (1, ("z", "x", "y")), (-2, ("x", "y", "z"))))
    assert W.is_zero()
    with pytest.raises(QuiverError):
        Potential(a2_quiver(), ((1, ("a",)),))


small_vec = st.lists(st.integers(0, 4), min_size=1, max_size=3)


@given(st.sampled_from(list(QUIVERS.values())), st.data())
@settings(max_examples=200)
def test_euler_form_bilinear(Q, data):
    vec = st.lists(st.integers(0, 4), min_size=Q.n, max_size=Q.n).map(tuple)
    d, d2, e = data.draw(vec), data.draw(vec), data.draw(vec)
    k = data.draw(st.integers(0, 3))
    s = tuple(a + b for a, b in zip(d, d2))
    assert euler_form(Q, s, e) == euler_form(Q, d, e) + euler_form(Q, d2, e)
    assert euler_form(Q, e, s) == euler_form(Q, e, d) + euler_form(Q, e, d2)
    assert euler_form(Q, tuple(k * x for x in d), e) == k * euler_form(Q, d, e)
    assert antisym_form(Q, d, e) == -antisym_form(Q, e, d)


words = st.lists(st.sampled_from("xyz"), min_size=1, max_size=6)


@given(words, st.integers(0, 5), st.sampled_from("xyz"))
@settings(max_examples=200)
def test_cyclic_derivative_rotation_invariant(word, k, alpha):
    Q = loop_quiver(3)
    k %= len(word)
    rotated = tuple(word[k:] + word[:k])
    assert canonical_rotation(rotated) == canonical_rotation(word)
    assert cyclic_derivative(Potential(Q, ((1, rotated),)), alpha) == cyclic_derivative(
        Potential(Q, ((1, canonical_rotation(word)),)), alpha
    )


def _path_matrix(path, mats, size):
    # a path (a1, ..., an) acts as M_an ... M_a1
    out = np.eye(size, dtype=object)
    for a in path:
        out = mats[a].dot(out)
    return out


def _dual_trace(cycle, mats, alpha, H):
    """d/de tr W(M + e H) by forward-mode dual numbers (value, derivative)."""
    size = H.shape[0]
    val, der = np.eye(size, dtype=object), np.zeros((size, size), dtype=object)
    for a in cycle:
        dm = H if a == alpha else np.zeros_like(H)
        val, der = mats[a].dot(val), mats[a].dot(der) + dm.dot(val)
    return np.trace(der)


@given(st.lists(st.tuples(st.integers(-3, 3), words), min_size=1, max_size=3), st.sampled_from("xyz"), st.data())
@settings(max_examples=100)
def test_cyclic_derivative_is_trace_gradient(terms, alpha, data):
    Q = loop_quiver(3)
    W = Potential(Q, tuple((c, tuple(w)) for c, w in terms))
    entries = st.lists(st.integers(-3, 3), min_size=4, max_size=4)
    mats = {a: np.array(data.draw(entries), dtype=object).reshape(2, 2) for a in "xyz"}
    H = np.array(data.draw(entries), dtype=object).reshape(2, 2)
    expected = sum(c * _dual_trace(cyc, mats, alpha, H) for c, cyc in W.terms)
    got = sum(c * np.trace(H.dot(_path_matrix(p, mats, 2))) for c, p in cyclic_derivative(W, alpha))
    assert got == expected


@given(st.lists(st.tuples(st.integers(-3, 3), words), max_size=4))
@settings(max_examples=200)
def test_valid_cut_paths_avoid_cut(terms):
    Q = loop_quiver(3)
    W = Potential(Q, tuple((c, tuple(w)) for c, w in terms))
    for cut in ({"x"}, {"y"}, {"z"}, {"x", "y"}):
        if validate_cut(W, cut):
            for a in cut:
                for _, p in cyclic_derivative(W, a):
                    assert not set(p) & cut
