import pytest
from hypothesis import given, settings

from layercraft import fixtures, geometry
from layercraft.arrangement import Arrangement, build_layer_poset
from layercraft.errors import CycleDetected, MultipleMinima, NotRanked
from layercraft.poset import (PolyZ, char_poly, generated_subposet, is_isomorphic, joins, mobius,
                              same_elements, separator_epsilon, upper_set, validate)

from strategies import corpus_posets

# Hasse data read off the B2 figure: seven nodes, ten edges
B2_ELEMENTS = ["T", "t1=1", "t2=1", "t1t2=1", "t1t2^-1=1", "(1,1)", "(-1,-1)"]
B2_COVERS = [("T", "t1=1"), ("t1=1", "(1,1)"), ("(1,1)", "t2=1"), ("t2=1", "T"), ("T", "t1t2=1"),
             ("t1t2=1", "(1,1)"), ("(1,1)", "t1t2^-1=1"), ("t1t2^-1=1", "(-1,-1)"),
             ("(-1,-1)", "t1t2=1"), ("T", "t1t2^-1=1")]


def b2_hand():
    # the figure draws undirected edges; orient them by rank
    rank = {"T": 0, "(1,1)": 2, "(-1,-1)": 2}
    covers = [(a, b) if rank.get(a, 1) < rank.get(b, 1) else (b, a) for a, b in B2_COVERS]
    return validate(B2_ELEMENTS, covers)


def el(P, ident):
    return P.element(ident)


def by_label(P, label):
    (x,) = [x for x in P.elements if P.label(x) == label]
    return x


def chain(n):
    return validate(list(range(n)), [(i, i + 1) for i in range(n - 1)])


# ---------------------------------------------------------------- validate

def test_validate_trivial():
    P = validate(["0"], [])
    assert len(P) == 1 and P.rk == 0 and char_poly(P) == PolyZ([1])


def test_validate_b2_figure():
    P = b2_hand()
    assert len(P) == 7 and len(P.cover_pairs()) == 10
    assert P.rank_counts() == [1, 4, 2]
    assert P.rank(el(P, "(1,1)")) == 2 and P.rank(el(P, "t1t2^-1=1")) == 1


def test_validate_transitive_reduction():
    # a<b<c plus the redundant a<c: the redundant pair is dropped, so this is a chain
    P = validate(["a", "b", "c"], [("a", "b"), ("b", "c"), ("a", "c")])
    assert P.rank(el(P, "c")) == 2 and len(P.cover_pairs()) == 2


def test_validate_not_ranked():
    # pentagon: 0<a<b<1 and 0<c<1
    with pytest.raises(NotRanked):
        validate(["0", "a", "b", "c", "1"], [("0", "a"), ("a", "b"), ("b", "1"), ("0", "c"), ("c", "1")])


def test_validate_errors():
    with pytest.raises(MultipleMinima):
        validate(["a", "b"], [])
    with pytest.raises(CycleDetected):
        validate(["0", "a", "b"], [("0", "a"), ("a", "b"), ("b", "a")])


# ---------------------------------------------------------------- Möbius and χ

def test_mobius_examples():
    P = chain(2)
    assert mobius(P)[(P.bottom, el(P, 1))] == -1
    B = b2_hand()
    mu = mobius(B)
    assert mu[(B.bottom, el(B, "(1,1)"))] == 3
    assert mu[(B.bottom, el(B, "(-1,-1)"))] == 1
    W = fixtures.pi3w()
    assert mobius(W)[(W.bottom, el(W, 8))] == 5


def test_char_poly_examples():
    assert char_poly(validate([0], [])) == PolyZ([1])
    assert char_poly(b2_hand()) == PolyZ([4, -4, 1])
    assert char_poly(fixtures.pi3w()) == PolyZ([9, -6, 1])


def test_hand_b2_matches_built_b2():
    assert is_isomorphic(b2_hand(), fixtures.b2_layers().poset) is not None


@settings(max_examples=60, deadline=None)
@given(corpus_posets())
def test_mobius_and_char_poly_properties(P):
    mu = mobius(P)
    b = P.bottom
    for y in P.elements:
        if y != b:
            assert sum(mu[(b, c)] for c in P.elements if P.leq(c, y)) == 0
    chi = char_poly(P)
    assert chi.degree == P.rk and chi.is_monic()
    if geometry.is_locally_geometric(P):
        c = chi.coeffs
        assert all((-1) ** (P.rk - i) * c[i] > 0 for i in range(P.rk + 1))


# ---------------------------------------------------------------- joins and subposets

def test_joins_examples():
    P = chain(3)
    assert joins(P, [P.bottom, el(P, 1)]) == {el(P, 1)}
    B = b2_hand()
    assert joins(B, [el(B, "t1t2=1"), el(B, "t1t2^-1=1")]) == {el(B, "(1,1)"), el(B, "(-1,-1)")}
    G = fixtures.ind_not_geo()
    J = joins(G, [el(G, "a3"), el(G, "a4")])
    assert J == {el(G, "y"), el(G, "v")} and all(G.rank(x) == 2 for x in J)


def test_generated_subposet_examples():
    B = b2_hand()
    assert same_elements(generated_subposet(B, B.atoms), B)
    assert len(generated_subposet(B, [])) == 1
    D = generated_subposet(B, [el(B, "t1t2=1"), el(B, "t1t2^-1=1")])
    assert {D.label(x) for x in D.elements} == {"T", "t1t2=1", "t1t2^-1=1", "(1,1)", "(-1,-1)"}


def test_upper_set_examples():
    B = b2_hand()
    assert same_elements(upper_set(B, B.bottom), B)
    U = upper_set(B, el(B, "t1t2^-1=1"))
    assert len(U) == 3 and char_poly(U) == PolyZ([-2, 1]) and U.rank(el(B, "(1,1)")) == 1
    W = fixtures.pi3w()
    assert all(char_poly(upper_set(W, a)) == PolyZ([-2, 1]) for a in W.atoms)


@settings(max_examples=60, deadline=None)
@given(corpus_posets())
def test_subposet_coherence(P):
    atoms = P.atoms
    B1 = atoms[::2] + atoms[1:2]
    B2 = B1[:2]
    Q = generated_subposet(P, B1)
    assert same_elements(generated_subposet(Q, Q.atoms), Q)
    assert same_elements(generated_subposet(Q, B2), generated_subposet(P, B2))
    assert same_elements(generated_subposet(P, atoms), P)
    for x in atoms[:3]:
        Ux = upper_set(P, x)
        for y in Ux.elements[:4]:
            assert same_elements(upper_set(Ux, y), upper_set(P, y))


# ---------------------------------------------------------------- separators

def test_separator_epsilon_examples():
    P = chain(2)
    assert separator_epsilon(P, el(P, 1)) == 1
    B = b2_hand()
    assert all(separator_epsilon(B, a) == 0 for a in B.atoms)
    G = fixtures.ind_not_geo()
    X = generated_subposet(G, [el(G, "x")])
    assert separator_epsilon(X, el(G, "x")) == 1


# ---------------------------------------------------------------- isomorphism

def test_is_isomorphic_examples():
    B = b2_hand()
    iso = is_isomorphic(B, B)
    assert iso is not None and all(iso[x] == x for x in B.elements)
    V = validate(["0", "a", "b"], [("0", "a"), ("0", "b")])
    assert is_isomorphic(chain(3), V) is None
    single = build_layer_poset(Arrangement("torus", 1, [(1,)])).poset
    assert is_isomorphic(generated_subposet(B, [el(B, "t1=1")]), chain(2)) is not None
    assert is_isomorphic(single, chain(2)) is not None


@settings(max_examples=40, deadline=None)
@given(corpus_posets(), corpus_posets())
def test_is_isomorphic_reflexive_symmetric(P, Q):
    assert is_isomorphic(P, P) is not None
    pq = is_isomorphic(P, Q)
    qp = is_isomorphic(Q, P)
    assert (pq is None) == (qp is None)
    if pq is not None:
        assert char_poly(P) == char_poly(Q)
        for x in P.elements:
            for y in P.elements:
                assert P.leq(x, y) == Q.leq(pq[x], pq[y])
