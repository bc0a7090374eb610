"""Projective bimodules, their Hom spaces and tensor products."""

import itertools

import pytest
from hypothesis import given, strategies as st
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from braidcat import bimod
from braidcat.bimod import (
    BimoduleMorphism,
    apply_entry,
    compose,
    diagonal,
    generator,
    hom_basis,
    identity,
    is_bimodule_image,
    left_act,
    right_act,
    tensor_morphisms,
    tensor_objects,
    tensor_summand,
    underlying_lattice,
)
from braidcat.complex import beta, delta, gamma
from braidcat.zigzag import BasisPath, build_ring


def brute_force_hom_rank(ring, a, b, degree):
    """Rank of the degree-``degree`` bimodule maps ``a -> b``, by a rational
    nullspace over all Z-linear maps of the underlying lattices."""
    La, Lb = underlying_lattice(ring, a), underlying_lattice(ring, b)
    # a map of degree d sends keys of degree e to keys of degree e + d
    unknowns = [(x, y) for x, dx in zip(La.keys, La.degrees) for y, dy in zip(Lb.keys, Lb.degrees)
                if dy == dx + degree]
    if not unknowns:
        return 0
    col = {u: k for k, u in enumerate(unknowns)}
    rows = {}

    def phi_coeffs(x):
        # phi(x) as {y: column index}
        return {y: col[(x, y)] for (xx, y) in unknowns if xx == x}

    for g in ring.basis:
        for x in La.keys:
            for side in ("l", "r"):
                gx = left_act(ring, g, {x: 1}) if side == "l" else right_act(ring, {x: 1}, g)
                # phi(g x) - g phi(x) == 0, one equation per target key
                eq = {}
                for xx, c in gx.items():
                    for y, k in phi_coeffs(xx).items():
                        eq.setdefault(y, {})
                        eq[y][k] = eq[y].get(k, 0) + c
                for y, k in phi_coeffs(x).items():
                    gy = left_act(ring, g, {y: 1}) if side == "l" else right_act(ring, {y: 1}, g)
                    for yy, c in gy.items():
                        eq.setdefault(yy, {})
                        eq[yy][k] = eq[yy].get(k, 0) - c
                for y, coeffs in eq.items():
                    key = (g, x, side, y)
                    rows[key] = coeffs
    m = DomainMatrix([[QQ(r.get(k, 0)) for k in range(len(unknowns))] for r in rows.values()],
                     (len(rows), len(unknowns)), QQ)
    return len(unknowns) - m.rank()


def summands(n):
    out = [diagonal()]
    out += [tensor_summand(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if abs(i - j) <= 1]
    return out


@pytest.mark.parametrize("n", [1, 2, 3])
def test_hom_ranks_match_brute_force(n):
    ring = build_ring(n)
    for a, b in itertools.product(summands(n), repeat=2):
        for d in range(-2, 5):
            assert hom_basis(ring, a, b, d).rank == brute_force_hom_rank(ring, a, b, d), (a, b, d)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_named_hom_ranks(n):
    ring = build_ring(n)
    A = diagonal()
    assert hom_basis(ring, A, A, 0).rank == 1
    assert hom_basis(ring, A, A, 2).rank == n
    for i in range(1, n + 1):
        H = hom_basis(ring, A, tensor_summand(i, i, -2), 0)
        assert H.rank == 1
        assert H.coordinates(gamma(ring, i).entry(0, 0)) in ([1], [-1])


def test_lattice_ranks():
    r2, r3 = build_ring(2), build_ring(3)
    assert underlying_lattice(r2, diagonal()).rank == 6
    assert underlying_lattice(r3, tensor_summand(1, 1)).rank == 9
    assert underlying_lattice(r3, tensor_summand(1, 1, 3)).graded_rank() == {3: 1, 4: 2, 5: 3, 6: 2, 7: 1}


@pytest.mark.parametrize("n", [2, 3, 4])
def test_tensor_graded_rank_symmetric(n):
    ring = build_ring(n)
    for i, j in itertools.product(range(1, n + 1), repeat=2):
        assert (underlying_lattice(ring, tensor_summand(i, j)).graded_rank()
                == underlying_lattice(ring, tensor_summand(j, i)).graded_rank())


@pytest.mark.parametrize("n", [2, 3, 4])
def test_delta_kills_beta(n):
    ring = build_ring(n)
    for i in range(1, n + 1):
        assert compose(delta(ring, i), beta(ring, i)).is_zero()


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_beta_after_gamma_is_sum_of_loops(n):
    ring = build_ring(n)
    for i in range(1, n + 1):
        g = gamma(ring, i)
        b = BimoduleMorphism(ring, g.target, (diagonal(),), 0,
                             {(0, 0): {BasisPath((i,)): 1}})
        expected = ring.X(i - 1) + ring.X(i) + ring.X(i) + ring.X(i + 1)
        assert compose(b, g).entry(0, 0) == dict(expected.coeffs)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_gamma_formula(n):
    ring = build_ring(n)
    for i in range(1, n + 1):
        img = gamma(ring, i).entry(0, 0)
        e, x = BasisPath((i,)), next(iter(ring.X(i).coeffs))
        expected = {(e, x): 1, (x, e): 1}
        if n > 1:
            for j in (i - 1, i + 1):
                if 1 <= j <= n:
                    expected[(BasisPath((j, i)), BasisPath((i, j)))] = 1
        assert img == expected


@pytest.mark.parametrize("n", [2, 3])
def test_structure_maps_are_bimodule_maps(n):
    ring = build_ring(n)
    for i in range(1, n + 1):
        for m in (beta(ring, i), gamma(ring, i), delta(ring, i)):
            for (t, s), img in m.entries.items():
                assert is_bimodule_image(ring, m.source[s], img)


def test_non_bimodule_image_rejected():
    ring = build_ring(3)
    # an arrow is not central, so it is not the image of 1
    assert not is_bimodule_image(ring, diagonal(), {BasisPath((1, 2)): 1})


@pytest.mark.parametrize("n", [2, 3])
def test_tensor_of_projectives_splits(n):
    ring = build_ring(n)
    for i in range(1, n + 1):
        lay = tensor_objects(ring, (tensor_summand(i, i),), (tensor_summand(i, i),))
        assert [s.shift for s in lay.summands] == [0, 2]
        for j in range(1, n + 1):
            lay = tensor_objects(ring, (tensor_summand(i, i),), (tensor_summand(j, j),))
            assert len(lay.summands) == len(ring.paths_between(i, j))
    lay = tensor_objects(ring, (diagonal(),), (tensor_summand(1, 2, 3),))
    assert lay.summands == (tensor_summand(1, 2, 3),)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_middle_interchange(n):
    ring = build_ring(n)
    for i, j in itertools.product(range(1, n + 1), repeat=2):
        u, v = beta(ring, i), beta(ring, j)
        lhs = compose(tensor_morphisms(u, identity(ring, v.target)), tensor_morphisms(identity(ring, u.source), v))
        rhs = compose(tensor_morphisms(identity(ring, u.target), v), tensor_morphisms(u, identity(ring, v.source)))
        assert lhs == tensor_morphisms(u, v) == rhs


@pytest.mark.parametrize("n", [2, 3])
def test_tensor_identity_is_identity(n):
    ring = build_ring(n)
    M = (diagonal(), tensor_summand(1, 2, 1))
    N = (tensor_summand(2, 1), diagonal(-1))
    t = tensor_morphisms(identity(ring, M), identity(ring, N))
    assert t == identity(ring, t.source)


def test_gamma_tensor_gamma_two_ways():
    ring = build_ring(3)
    g = gamma(ring, 2)
    ident = identity(ring, g.source)
    one_way = compose(tensor_morphisms(g, identity(ring, g.target)), tensor_morphisms(ident, g))
    other = compose(tensor_morphisms(identity(ring, g.target), g), tensor_morphisms(g, ident))
    assert one_way == tensor_morphisms(g, g) == other


def test_morphism_algebra():
    ring = build_ring(3)
    b = beta(ring, 2)
    assert (b + b) == b.scaled(2)
    assert (b - b).is_zero()
    assert compose(identity(ring, b.target), b) == b == compose(b, identity(ring, b.source))
    with pytest.raises(ValueError):
        compose(b, b)


@given(st.integers(1, 3), st.integers(-2, 2))
def test_generator_maps_to_itself_under_identity(i, k):
    ring = build_ring(3)
    s = tensor_summand(i, i, k)
    x = generator(ring, s)
    assert apply_entry(ring, s, x, x) == x


lattice_key = st.sampled_from(underlying_lattice(build_ring(3), tensor_summand(2, 2)).keys)
paths3 = st.sampled_from(build_ring(3).basis)


@given(lattice_key, paths3, paths3)
def test_left_and_right_actions_commute(k, a, b):
    ring = build_ring(3)
    x = {k: 1}
    assert right_act(ring, left_act(ring, a, x), b) == left_act(ring, a, right_act(ring, x, b))
