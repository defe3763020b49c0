from itertools import combinations

import pytest
from hypothesis import given, settings

from layercraft import fixtures, geometry
from layercraft.arrangement import Arrangement, build_layer_poset
from layercraft.errors import NotALattice, NotLocallyGeometric
from layercraft.poset import (PolyZ, char_poly, closure_mask, generated_subposet, is_isomorphic,
                              lower_interval, meets, upper_set, validate)
from layercraft.rootsys import build_arrangement_from_ideal, full_ideal

from strategies import arrangements, corpus_posets


def by_label(P, label):
    (x,) = [x for x in P.elements if P.label(x) == label]
    return x


def boolean(n):
    subsets = [frozenset(s) for k in range(n + 1) for s in combinations(range(n), k)]
    covers = [(a, b) for a in subsets for b in subsets if a < b and len(b) == len(a) + 1]
    return validate(subsets, covers)


def chain(n):
    return validate(list(range(n)), [(i, i + 1) for i in range(n - 1)])


def u34():
    pts = "abcd"
    lines = ["".join(p) for p in combinations(pts, 2)]
    covers = [("0", p) for p in pts] + [(p, l) for l in lines for p in l] + [(l, "1") for l in lines]
    return validate(["0", *pts, *lines, "1"], covers)


def a2_layers():
    return build_layer_poset(Arrangement("torus", 3, [(1, -1, 0), (0, 1, -1), (1, 0, -1)]))


# ---------------------------------------------------------------- lattices

def test_is_lattice_examples():
    assert geometry.is_lattice(boolean(2))
    assert not geometry.is_lattice(fixtures.b2_layers().poset)
    assert geometry.is_lattice(validate([0], []))


def test_is_geometric_lattice_examples():
    assert geometry.is_geometric_lattice(boolean(3))
    assert not geometry.is_geometric_lattice(chain(4))
    B = fixtures.b2_layers().poset
    assert geometry.is_geometric_lattice(lower_interval(B, by_label(B, "(1,1)")))
    with pytest.raises(NotALattice):
        geometry.is_geometric_lattice(B)


def test_is_locally_geometric_examples():
    assert geometry.is_locally_geometric(build_layer_poset(fixtures.b2_torus(), trust_geometric=False).poset)
    assert geometry.is_locally_geometric(fixtures.pi3w())
    assert not geometry.is_locally_geometric(chain(4))


def test_is_geometric_poset_examples():
    assert geometry.is_geometric_poset(build_layer_poset(fixtures.b2_torus(), trust_geometric=False).poset)
    assert not geometry.is_geometric_poset(fixtures.ind_not_geo())
    assert geometry.is_geometric_poset(boolean(3))
    with pytest.raises(NotLocallyGeometric):
        geometry.is_geometric_poset(chain(4))


@settings(max_examples=60, deadline=None)
@given(corpus_posets())
def test_geometric_checks_agree_with_literal_definitions(P):
    lg = geometry.is_locally_geometric(P)
    assert lg == geometry.is_locally_geometric_by_intervals(P)
    if lg and len(P.atoms) <= 8:
        assert geometry.is_geometric_poset(P) == geometry.is_geometric_poset_bruteforce(P)


@settings(max_examples=60, deadline=None)
@given(arrangements())
def test_layer_posets_are_geometric(A):
    P = build_layer_poset(A, trust_geometric=False).poset
    assert geometry.is_geometric_poset(P)


# ---------------------------------------------------------------- modular elements

def test_is_modular_examples():
    U = u34()
    top = U.element("1")
    assert geometry.is_modular(U, U.bottom) and geometry.is_modular(U, top)
    assert all(geometry.is_modular(U, a) for a in U.atoms)
    assert not geometry.is_modular(U, U.element("ab"))
    with pytest.raises(NotALattice):
        geometry.is_modular(fixtures.b2_layers().poset, 0)


@settings(max_examples=40, deadline=None)
@given(arrangements(groups=("real",)))
def test_modular_law_and_rank_criterion_agree(A):
    L = build_layer_poset(A).poset
    assert geometry.is_geometric_lattice(L)
    for x in L.elements:
        m = geometry.is_modular(L, x)
        assert m == geometry.is_modular_by_rank(L, x)
        if L.rank(x) <= 1:
            assert m


# ---------------------------------------------------------------- ideals

def test_check_M_ideal_examples():
    B = fixtures.b2_layers().poset
    Q = generated_subposet(B, [by_label(B, "t1t2^-1=1")])
    w = geometry.check_M_ideal(B, Q)
    assert w is not None and w.rank == 1 and w.kind == "M"
    assert set(w.modular_partners) == set(B.maximal)
    assert all(B.leq(y, x) for x, y in w.modular_partners.items())
    D = fixtures.d2_poset()
    assert geometry.check_M_ideal(D, [D.bottom]) is None
    assert geometry.check_M_ideal(B, generated_subposet(B, [by_label(B, "t1=1")])) is None


def test_check_TM_ideal_examples():
    B = fixtures.b2_layers().poset
    assert geometry.check_TM_ideal(B, generated_subposet(B, [by_label(B, "t1t2^-1=1")])) is None
    A2 = a2_layers().poset
    Q = generated_subposet(A2, [by_label(A2, "t1t2^-1=1")])
    assert geometry.check_TM_ideal(A2, Q) is not None
    assert geometry.check_TM_ideal(A2, A2) is None


def test_supersolvable_examples():
    B = fixtures.b2_layers().poset
    ss = geometry.is_supersolvable(B)
    assert ss is not None and geometry.verify_chain(B, ss)
    assert geometry.is_strictly_supersolvable(B) is None
    assert geometry.is_supersolvable(fixtures.d2_poset()) is not None
    B3 = build_layer_poset(build_arrangement_from_ideal(full_ideal("B", 3), "integer")).poset
    assert geometry.is_supersolvable(B3) is None


def all_candidates(P):
    """Element masks of every atom-generated subposet of rank rk-1."""
    seen = set()
    for k in range(len(P.atoms) + 1):
        for B in combinations(P.atoms, k):
            m = 0
            for a in B:
                m |= 1 << a
            q = closure_mask(P, m)
            if q not in seen:
                seen.add(q)
                yield q


@settings(max_examples=50, deadline=None)
@given(corpus_posets(max_chars=4))
def test_ideal_invariants(P):
    if not geometry.is_locally_geometric(P) or len(P.atoms) > 8:
        return
    geo = geometry.is_geometric_poset(P)
    for q in all_candidates(P):
        w = geometry.check_M_ideal(P, q)
        if geo:
            assert (w is None) == (geometry.check_M_ideal(P, q, method="gpmi") is None)
        if w is None:
            continue
        assert geometry.is_pure(P)
        Q = w.view(P)
        inside = set(w.atom_set)
        for a in P.atoms:
            trivial = all(meets(P, [y, a]) == {P.bottom} for y in Q.maximal)
            assert (a not in inside) == trivial
        t = geometry.check_TM_ideal(P, q)
        if t is not None:
            outside = [a for a in P.atoms if a not in inside]
            assert char_poly(P) == PolyZ([-len(outside), 1]) * char_poly(Q)
            for a in outside:
                assert is_isomorphic(Q, upper_set(P, a)) is not None


@settings(max_examples=40, deadline=None)
@given(corpus_posets())
def test_chain_witnesses_verify(P):
    if not geometry.is_locally_geometric(P):
        return
    for find in (geometry.is_supersolvable, geometry.is_strictly_supersolvable):
        c = find(P)
        if c is not None:
            assert geometry.verify_chain(P, c)
            assert sum(c.exponents) == len(P.atoms)
            masks = [w.mask for w in c.ideals]
            again = geometry.chain_from_masks(P, masks, tm=c.kind == "TM")
            assert again is not None and again.d == c.d
