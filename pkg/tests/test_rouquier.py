"""Rouquier complexes of Soergel bimodules over Z[y_1..y_{n-1}]."""

import random

import pytest
from hypothesis import given, strategies as st
from sympy import series, symbols

from braidcat.braid import BraidMovie, BraidWord, MovieStep, polarity, random_movie
from braidcat.rouquier import (
    BSummand,
    a_coefficient,
    build_rouquier,
    build_rouquier_R,
    certify_equivalence,
    chain_map_basis,
    find_bimodule_iso,
    find_chain_map,
    graded_rank,
    is_null_homotopic,
    k_class_on_A,
    one_term,
    poly_ring,
    r_identity_map,
    r_shift,
    r_tensor,
    r_unit,
    semitrivial_invariant,
    tensor_truncated,
    unit_pairs,
    verify_rouquier_relations,
    _bs,
)

t = symbols("t")


def polys(strands, max_terms=4, max_deg=3):
    nv = strands - 1
    mono = st.tuples(*[st.integers(0, max_deg)] * nv)
    return st.dictionaries(mono, st.integers(-3, 3).filter(bool), max_size=max_terms)


def hilbert_coefficients(nv, k, shift, D):
    """Coefficients of t^shift (1 + t)^k / (1 - t)^nv up to t^D."""
    s = series(t ** shift * (1 + t) ** k / (1 - t) ** nv, t, 0, D + 1).removeO()
    return {d: int(s.coeff(t, d)) for d in range(0, D + 1)}


# --- the polynomial ring and its symmetric group action ---

@given(polys(4))
def test_reflection_is_an_involution(f):
    R = poly_ring(4)
    for i in (1, 2, 3):
        assert R.s(i, R.s(i, f)) == f


@given(polys(4))
def test_reflections_satisfy_braid_relations(f):
    R = poly_ring(4)
    s = R.s
    assert s(1, s(2, s(1, f))) == s(2, s(1, s(2, f)))
    assert s(1, s(3, f)) == s(3, s(1, f))


@given(polys(4), polys(4))
def test_demazure_twisted_leibniz(f, g):
    R = poly_ring(4)
    for i in (1, 2, 3):
        lhs = R.demazure(i, R.mul(f, g))
        rhs = R.add(R.mul(R.demazure(i, f), g), R.mul(R.s(i, f), R.demazure(i, g)))
        assert lhs == rhs


@given(polys(4))
def test_decomposition_over_invariants(f):
    R = poly_ring(4)
    for i in (1, 2, 3):
        f0, f1 = R.decompose(i, f)
        assert R.is_invariant(i, f0) and R.is_invariant(i, f1)
        assert R.add(f0, R.mul(f1, R.complement(i))) == f


def test_complement_has_unit_derivative():
    for strands in (3, 4, 5):
        R = poly_ring(strands)
        for i in range(1, strands):
            assert set(R.demazure(i, R.complement(i)).values()) in ({1}, {-1})
    R = poly_ring(2)
    assert R.demazure(1, R.complement(1)) == {(0,): 2}


def test_monomial_counts():
    R = poly_ring(4)
    assert [len(R.monomials(d)) for d in range(5)] == [1, 3, 6, 10, 15]
    assert R.monomials(-1) == []


# --- Bott-Samelson bimodules ---

@pytest.mark.parametrize("strands,word", [(3, (1,)), (3, (1, 2)), (3, (1, 1)), (4, (1, 3, 2)), (2, (1,))])
def test_graded_ranks_match_hilbert_series(strands, word):
    expected = hilbert_coefficients(strands - 1, len(word), 0, 6)
    for d in range(7):
        assert graded_rank(strands, word, 0, d) == expected[d]


def test_bimodule_rank_pattern():
    # B_i (x) B_i has the graded rank of B_i (+) B_i{1}
    ranks = tensor_truncated(3, BSummand((1,)), BSummand((1,)), 4)
    assert ranks == {0: 1, 1: 4, 2: 8, 3: 12, 4: 16}
    for d in range(5):
        assert ranks[d] == graded_rank(3, (1,), 0, d) + graded_rank(3, (1,), 1, d)


@given(st.sampled_from([(1,), (2,), (1, 2), (2, 1), (1, 1)]), polys(3), polys(3))
def test_right_action_is_associative(word, f, g):
    bs = _bs(3)
    R = bs.R
    for e in [(0,) * len(word), (1,) * len(word)]:
        b = {(e, R.zero_exp()): 1}
        lhs = bs.right_mul(word, bs.right_mul(word, b, f), g)
        rhs = bs.right_mul(word, b, R.mul(f, g))
        assert lhs == rhs


@given(polys(4), st.integers(1, 3))
def test_invariants_pass_through_the_tensor(f, i):
    bs = _bs(4)
    R = bs.R
    sym = R.add(f, R.s(i, f))
    one = {((0,), R.zero_exp()): 1}
    assert bs.right_mul((i,), one, sym) == bs.left_mul(sym, one)


@pytest.mark.parametrize("strands", [3, 4])
def test_units_are_bimodule_elements(strands):
    bs = _bs(strands)
    R = bs.R
    for i in range(1, strands):
        for unit in ("primitive", "symmetric"):
            u = {}
            for a, b in unit_pairs(strands, i, unit):
                for k, v in bs.pure_tensor((i,), [a, b]).items():
                    u[k] = u.get(k, 0) + v
            for j in range(1, strands):
                y = R.y(j)
                assert bs.left_mul(y, u) == bs.right_mul((i,), u, y)


@pytest.mark.parametrize("strands", [3, 4])
def test_multiplication_after_unit(strands):
    R = poly_ring(strands)
    for i in range(1, strands):
        sym = {}
        for a, b in unit_pairs(strands, i, "symmetric"):
            sym = R.add(sym, R.mul(a, b))
        assert sym == {m: 2 * c for m, c in R.y(i).items()}
        prim = {}
        for a, b in unit_pairs(strands, i, "primitive"):
            prim = R.add(prim, R.mul(a, b))
        assert prim in (R.y(i), {m: -c for m, c in R.y(i).items()})


def test_primitive_unit_needs_two_variables():
    with pytest.raises(ValueError):
        unit_pairs(2, 1, "primitive")
    with pytest.raises(ValueError):
        unit_pairs(3, 1, "bogus")


# --- complexes, chain maps and certificates ---

@pytest.mark.parametrize("strands", [3, 4])
def test_letter_complexes(strands):
    for i in range(1, strands):
        Ri, Rp = build_rouquier(strands, i)
        assert Ri.check() and Rp.check()
        assert Ri.term(-1) == (BSummand((i,)),) and Rp.term(1) == (BSummand((i,), -1),)
    with pytest.raises(ValueError):
        build_rouquier(strands, strands)


@given(st.lists(st.sampled_from([1, -1, 2, -2]), max_size=3))
def test_d_squared_zero(word):
    assert build_rouquier_R(BraidWord(3, tuple(word))).check()


def test_identity_is_a_chain_map_and_not_null():
    c = build_rouquier_R(BraidWord(3, (1, 2)))
    f = r_identity_map(c)
    assert f.is_chain_map()
    assert not is_null_homotopic(f)


def test_inverse_pairs_certified():
    for word in ((1, -1), (-1, 1), (2, -2)):
        cert = certify_equivalence("inv", BraidWord(3, word), BraidWord(3, ()), 5)
        assert cert.ok, cert.to_dict()
        assert cert.map.is_chain_map()


def test_symmetric_unit_fails_over_the_integers():
    cert = certify_equivalence("sym", BraidWord(3, (1, -1)), BraidWord(3, ()), 4, unit="symmetric")
    assert not cert.ok


def test_doubled_identity_is_not_an_equivalence():
    c = build_rouquier_R(BraidWord(3, (1,)))
    from braidcat.rouquier import cone_acyclic
    good = cone_acyclic(r_identity_map(c), 4)
    bad = cone_acyclic(r_identity_map(c).scaled(2), 4)
    assert all(good.values())
    assert not all(bad.values())


def test_wrong_pairs_are_rejected():
    for w1, w2 in (((1,), (-1,)), ((1, 2), (2, 1))):
        cert = certify_equivalence("x", BraidWord(3, w1), BraidWord(3, w2), 4)
        assert not cert.ok


def test_relations_hold_through_degree_six():
    certs = verify_rouquier_relations(6)
    assert len(certs) == 5
    assert all(c.ok for c in certs), [c.to_dict() for c in certs if not c.ok]
    with pytest.raises(ValueError):
        verify_rouquier_relations(1)


def test_distant_bott_samelson_iso():
    f, degrees = find_bimodule_iso(4, BSummand((1, 3)), BSummand((3, 1)), 6)
    assert f is not None and all(degrees.values())
    g, _ = find_bimodule_iso(3, BSummand((1, 2)), BSummand((2, 1)), 4)
    assert g is None


def test_hom_from_unit_to_inverse_letter():
    A = r_unit(3)
    _, Rp = build_rouquier(3, 1)
    assert chain_map_basis(A, Rp) == []
    shifted = r_shift(Rp, 1)
    basis = chain_map_basis(A, shifted)
    assert len(basis) == 1
    assert all(is_null_homotopic(m) for m in basis)


def test_tensor_is_graded_by_sum():
    c = r_tensor(*build_rouquier(3, 1))
    assert set(c.degrees) == {-1, 0, 1}
    assert c.check()


@pytest.mark.parametrize("strands", [3, 4])
def test_letter_acts_as_minus_q_on_A(strands):
    nv = strands - 1
    hA = hilbert_coefficients(nv, 0, 0, 7)
    for i in range(1, strands):
        chi = k_class_on_A(strands, i, 6)
        chi_inv = k_class_on_A(strands, -i, 6)
        for d in range(0, 7):
            assert chi.get(d, 0) == -hA.get(d - 1, 0)
            assert chi_inv.get(d, 0) == -hA.get(d + 1, 0)


# --- the semi-trivial invariant ---

def test_semitrivial_zero_exactly_on_negative_branch_points():
    rng = random.Random(7)
    seen = {True: 0, False: 0}
    for _ in range(12):
        m = random_movie(rng, 3, 3, max_len=2)
        f = semitrivial_invariant(m)
        negative = polarity(m)[1] > 0
        seen[negative] += 1
        if negative:
            assert f.is_zero()
        else:
            assert f.is_chain_map()
            assert a_coefficient(f) in (1, -1)
            assert not is_null_homotopic(f)
    assert seen[True] and seen[False]


def test_semitrivial_single_births():
    pos = BraidMovie(BraidWord(3, ()), (MovieStep("birth", 0, 1, 1),))
    neg = BraidMovie(BraidWord(3, ()), (MovieStep("birth", 0, 1, -1),))
    assert a_coefficient(semitrivial_invariant(pos)) == 1
    assert semitrivial_invariant(neg).is_zero()
