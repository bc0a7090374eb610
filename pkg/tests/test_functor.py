"""From braid movies to chain maps."""

import random

import pytest
from hypothesis import given, strategies as st

from braidcat.braid import BraidMovie, BraidWord, MovieError, MovieStep, compose_movies, polarity, random_movie
from braidcat.complex import (
    compose_maps,
    delta_element,
    identity_map,
    is_null_homotopic,
    left_mult,
    reassociate,
    simplify,
    tensor,
    tensor_maps,
    unit_complex,
)
from braidcat.functor import (
    build_R,
    diagonal_coefficient,
    invariant,
    is_positive_nonvanishing,
    reidemeister_iso,
    ring_for,
    step_map,
    type2_map,
    verify_move,
)
from braidcat.zigzag import build_ring


def movie(n, start, *steps):
    return BraidMovie(BraidWord(n, tuple(start)), tuple(steps))


def test_build_R_shapes():
    ring = build_ring(2)
    assert build_R(BraidWord(3, ())).same_shape(unit_complex(ring))
    c = build_R(BraidWord(3, (1, -1)))
    assert simplify(c).complex.same_shape(unit_complex(ring))
    with pytest.raises(ValueError):
        build_R(BraidWord(3, (1,)), build_ring(3))
    with pytest.raises(ValueError):
        ring_for(1)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_branch_point_maps(n):
    ring = build_ring(n)
    A = unit_complex(ring)
    for i in range(1, n + 1):
        w = {v: type2_map(ring, v, i) for v in ("w1", "w2", "w3", "w4")}
        assert [w[v].degree for v in ("w1", "w2", "w3", "w4")] == [0, 0, 2, 2]
        assert all(m.is_chain_map() for m in w.values())
        mult = left_mult(A, delta_element(ring, i)) if n > 1 else None
        if mult is not None:
            assert compose_maps(w["w3"], w["w1"]) == mult
            assert compose_maps(w["w2"], w["w4"]) == mult
    with pytest.raises(ValueError):
        type2_map(ring, "w5", 1)


def test_identity_movie_gives_identity():
    w = BraidWord(3, (1, -2))
    inv = invariant(BraidMovie.identity(w))
    assert inv.map == identity_map(build_R(w))
    assert diagonal_coefficient(inv.map) == 1


@given(st.integers(0, 4), st.integers(0, 4), st.randoms(use_true_random=False))
def test_functoriality_is_exact(k1, k2, rnd):
    m1 = random_movie(rnd, 3, k1, max_len=3)
    m2 = random_movie(rnd, 3, k2, max_len=3, start=m1.end.letters)
    whole = invariant(compose_movies(m1, m2)).map
    assert whole == compose_maps(invariant(m2).map, invariant(m1).map)


@given(st.integers(2, 4), st.integers(0, 5), st.randoms(use_true_random=False))
def test_degree_is_twice_negative_branch_points(strands, k, rnd):
    m = random_movie(rnd, strands, k, max_len=3)
    inv = invariant(m)
    assert inv.map.is_chain_map()
    assert inv.degree == 2 * polarity(m)[1] == 2 * inv.p_minus


@pytest.mark.parametrize("word,step", [
    ((1, -1), MovieStep("r1", 0, dir="cancel")),
    ((), MovieStep("r1", 0, 2, -1, dir="insert")),
    ((1, 3), MovieStep("r2", 0)),
    ((1, 2, 1), MovieStep("r3", 0)),
    ((-2, -1, -2), MovieStep("r3", 0)),
    ((-1, 2, 1), MovieStep("r3", 0)),
])
def test_reidemeister_isos_are_invertible(word, step):
    strands = 4 if 3 in map(abs, word) else 3
    before = BraidWord(strands, word)
    after = step.apply(before)
    f = reidemeister_iso(step, before)
    g = reidemeister_iso(step.inverse(before), after)
    back = compose_maps(g, f)
    ident = identity_map(build_R(before))
    signs = [s for s in (1, -1) if is_null_homotopic(back - ident.scaled(s)) is not None]
    assert len(signs) == 1


def test_reidemeister_iso_rejects_branch_points():
    with pytest.raises(MovieError):
        reidemeister_iso(MovieStep("birth", 0, 1, 1), BraidWord(3, ()))


def test_distant_swap_is_a_permutation():
    f = reidemeister_iso(MovieStep("r2", 0), BraidWord(4, (1, 3)))
    for t, comp in f.components.items():
        # one unit entry per column
        cols = [s for (_, s) in comp.entries]
        assert sorted(cols) == list(range(len(comp.source)))


def test_move12_instance_is_equal_on_the_nose():
    m1 = movie(3, (), MovieStep("r1", 0, 1, -1, dir="insert"), MovieStep("death", 1, 1, 1))
    m2 = movie(3, (), MovieStep("birth", 0, 1, -1))
    F1, F2 = invariant(m1).map, invariant(m2).map
    v = verify_move(m1, m2)
    assert v.status == "equal" and v.sign == 1
    assert v.homotopy.verify()


def test_move13_instance_has_sign_minus_one():
    top = (-1, -2)
    m1 = movie(3, top, MovieStep("birth", 2, 1, -1))
    m2 = movie(3, top, MovieStep("birth", 0, 2, -1), MovieStep("r3", 0))
    v = verify_move(m1, m2)
    assert (v.status, v.sign, v.null) == ("equal", -1, False)
    assert v.to_dict()["sign"] == -1


def test_different_degrees_are_inequivalent():
    loop = movie(3, (), MovieStep("birth", 0, 1, 1), MovieStep("death", 0, 1, 1))
    assert invariant(loop).degree == 2
    v = verify_move(loop, BraidMovie.identity(BraidWord(3, ())))
    assert v.status == "inequivalent" and v.sign is None


def test_boundary_mismatch_rejected():
    with pytest.raises(MovieError):
        verify_move(movie(3, (1,)), movie(3, (2,)))


def test_double_negative_birth_is_null_homotopic():
    for n, i in ((3, 1), (3, 2), (4, 2)):
        m = movie(n, (), MovieStep("birth", 0, i, -1), MovieStep("birth", 0, i, -1))
        f = invariant(m).map
        assert f.degree == 4
        h = is_null_homotopic(f)
        assert h is not None and h.verify()
        single = invariant(movie(n, (), MovieStep("birth", 0, i, -1))).map
        assert is_null_homotopic(single) is None


def test_positive_movies_are_nonvanishing():
    rng = random.Random(11)
    for _ in range(10):
        m = random_movie(rng, 3, 5, max_len=3, positive_only=True)
        ok, coeff = is_positive_nonvanishing(m)
        assert ok and coeff in (1, -1)
        assert is_null_homotopic(invariant(m).map) is None


def test_single_positive_birth_coefficient():
    m = movie(3, (), MovieStep("birth", 0, 2, 1))
    assert is_positive_nonvanishing(m) == (True, 1)
    assert is_positive_nonvanishing(BraidMovie.identity(BraidWord(3, ()))) == (True, 1)
    with pytest.raises(ValueError):
        is_positive_nonvanishing(movie(3, (), MovieStep("birth", 0, 2, -1)))


@pytest.mark.parametrize("left,right", [
    (((1,), (MovieStep("death", 0, sign=1),)), ((3,), (MovieStep("birth", 1, 3, -1),))),
    (((1, -1), (MovieStep("r1", 0, dir="cancel"),)), ((-3,), (MovieStep("death", 0, sign=-1),))),
    (((-1,), (MovieStep("birth", 0, 1, 1),)), ((3, 3), ())),
])
def test_side_by_side_movies_tensor(left, right):
    (w1, s1), (w2, s2) = left, right
    m1 = movie(4, w1, *s1)
    m2 = movie(4, w2, *s2)
    both = movie(4, w1 + w2, *(s1 + tuple(s.shifted(len(m1.end), 0) for s in s2)))
    F = invariant(both).map
    F1, F2 = invariant(m1).map, invariant(m2).map
    to_start = reassociate(build_R(both.start), tensor(build_R(m1.start), build_R(m2.start)))
    to_end = reassociate(build_R(both.end), tensor(build_R(m1.end), build_R(m2.end)))
    lhs = compose_maps(to_end, F)
    rhs = compose_maps(tensor_maps(F1, F2), to_start)
    assert lhs == rhs or lhs == rhs.scaled(-1)
