from fractions import Fraction

import pytest
from hypothesis import assume, given, settings

from layercraft import fixtures, properties
from layercraft.arrangement import (Arrangement, GroupKind, Layer, arrangement_exponents, atom_layers,
                                    bottom_layer, build_layer_poset, char_poly_arrangement,
                                    check_arrangement_TM_condition, classify_arrangement,
                                    join_layers, layer_label, layer_leq, localization, restriction_poset)
from layercraft.errors import AtomNotFound, BudgetExceeded, LayerNotFound, ZeroCharacter
from layercraft.intlat import content_and_primitive
from layercraft.poset import PolyZ, char_poly, is_isomorphic
from layercraft.rootsys import all_ideals, build_arrangement_from_ideal, full_ideal

from strategies import arrangements

T, R = GroupKind.TORUS, GroupKind.REAL


def by_label(P, label):
    (x,) = [x for x in P.elements if P.label(x) == label]
    return x


def labels(Ls, group=T, dim=2):
    return [layer_label(L, group, dim) for L in Ls]


# ---------------------------------------------------------------- atoms and joins

def test_atom_layers_examples():
    two = atom_layers((0, 2), T)
    assert labels(two) == ["t2=1", "t2=-1"]
    assert [L.values for L in two] == [(0,), (Fraction(1, 2),)]
    assert len(atom_layers((1, 1), T)) == 1
    assert atom_layers((0, 2), R) == atom_layers((0, 1), R)
    with pytest.raises(ZeroCharacter):
        atom_layers((0, 0), T)


def test_join_layers_examples():
    (a,) = atom_layers((1, 1), T)
    (b,) = atom_layers((1, -1), T)
    pts = join_layers(a, b, T)
    assert sorted(labels(pts)) == ["(-1,-1)", "(1,1)"]
    plus, minus = atom_layers((2, 0), T)
    assert join_layers(plus, minus, T) == []
    (x,) = atom_layers((1, 1), R)
    (y,) = atom_layers((1, -1), R)
    (o,) = join_layers(x, y, R)
    assert o.rank == 2 and layer_label(o, R, 2) == "0"


@settings(max_examples=80, deadline=None)
@given(arrangements(max_chars=3))
def test_join_properties(A):
    ls = [L for c in A.characters for L in atom_layers(c, A.group)]
    for X in ls:
        for Y in ls:
            J = join_layers(X, Y, A.group)
            assert sorted(J) == sorted(join_layers(Y, X, A.group))
            if A.group is R:
                assert len(J) <= 1
            for Z in J:
                assert layer_leq(X, Z) and layer_leq(Y, Z)


@settings(max_examples=80, deadline=None)
@given(arrangements(groups=("torus",)))
def test_torus_atom_count_is_total_content(A):
    # characters with the same primitive part up to sign share their hypertori
    prims = {frozenset([c.primitive, tuple(-x for x in c.primitive)]) for c in A.characters}
    assume(len(prims) == len(A.characters))
    P = build_layer_poset(A).poset
    assert len(P.atoms) == sum(content_and_primitive(c.vector)[0] for c in A.characters)


def test_c2_integer_matrix_has_six_atoms():
    A = build_arrangement_from_ideal(full_ideal("C", 2), "integer")
    assert sorted(content_and_primitive(c.vector)[0] for c in A.characters) == [1, 1, 2, 2]
    assert len(build_layer_poset(A).poset.atoms) == 6


# ---------------------------------------------------------------- layer posets

def test_build_examples():
    assert len(build_layer_poset(Arrangement("torus", 2, [])).poset) == 1
    lp = fixtures.b2_layers()
    P = lp.poset
    # the figure: (S1)^2, four hypertori and the two points (1,1), (-1,-1)
    assert sorted(P.label(x) for x in P.elements) == sorted(
        ["(S1)^2", "t1=1", "t2=1", "t1t2=1", "t1t2^-1=1", "(1,1)", "(-1,-1)"])
    assert len(P.cover_pairs()) == 10
    S = build_layer_poset(fixtures.matrix_s("torus")).poset
    assert len(S) == 18 and S.rank_counts() == [1, 6, 9, 2]


def test_build_canonical_order_and_cap():
    lp = build_layer_poset(fixtures.matrix_s("torus"))
    assert lp.layers == sorted(lp.layers)
    assert lp.layers[0] == bottom_layer()
    with pytest.raises(BudgetExceeded):
        build_layer_poset(fixtures.matrix_s("torus"), cap=10)


def test_duplicate_characters_warn():
    with pytest.warns(UserWarning):
        A = Arrangement("torus", 2, [(1, 0), (1, 0), (0, 1)])
    assert len(A.characters) == 2


def join_closure(lp, x):
    """Layers reachable from X by repeated joins with atom layers."""
    atoms = [lp.layers[a] for a in lp.poset.atoms]
    group = lp.arrangement.group
    seen = {lp.layers[x]}
    todo = [lp.layers[x]]
    while todo:
        Z = todo.pop()
        for a in atoms:
            for W in join_layers(Z, a, group):
                if W not in seen:
                    seen.add(W)
                    todo.append(W)
    return seen


@settings(max_examples=60, deadline=None)
@given(arrangements())
def test_order_agrees_with_join_closure(A):
    lp = build_layer_poset(A)
    P = lp.poset
    if len(P) > 50:
        return
    for x in P.elements:
        above = join_closure(lp, x)
        for y in P.elements:
            assert P.leq(x, y) == (lp.layers[y] in above) == layer_leq(lp.layers[x], lp.layers[y])


@settings(max_examples=60, deadline=None)
@given(arrangements())
def test_arrangement_deletion_restriction(A):
    assert properties.arrangement_deletion_restriction(build_layer_poset(A)) == []


def test_type_b_root_and_integer_posets_isomorphic():
    for l in (1, 2, 3):
        for I in all_ideals("B", l):
            a = build_layer_poset(build_arrangement_from_ideal(I, "integer")).poset
            b = build_layer_poset(build_arrangement_from_ideal(I, "root")).poset
            assert is_isomorphic(a, b) is not None, I.labels()


# ---------------------------------------------------------------- polynomials

def test_char_poly_arrangement_examples():
    E = Arrangement("real", 3, [])
    assert char_poly_arrangement(E) == PolyZ.t_power(3)
    assert arrangement_exponents(E) == (0, 0, 0)
    assert char_poly_arrangement(fixtures.b2_torus()) == PolyZ.from_roots([2, 2])
    assert arrangement_exponents(fixtures.b2_torus()) == (2, 2)
    S = fixtures.matrix_s("real")
    assert char_poly_arrangement(S) == PolyZ([-1, 1]) * PolyZ([7, -5, 1])
    assert arrangement_exponents(S) is None


def test_non_essential_arrangement_pads_zeros():
    A = Arrangement("torus", 3, [(1, 0, 0), (0, 2, 0)])
    lp = build_layer_poset(A)
    assert lp.poset.rk == 2 and not A.essential
    assert char_poly_arrangement(A, lp) == char_poly(lp.poset).shift(1)
    assert arrangement_exponents(A, lp) == (0, 1, 2)


# ---------------------------------------------------------------- localization and restriction

def test_localization_examples():
    lp = fixtures.b2_layers()
    A = lp.arrangement
    # no hypertorus contains the whole torus; all four pass through (1,1)
    assert localization(A, bottom_layer(), lp).characters == ()
    X = lp.layers[by_label(lp.poset, "(1,1)")]
    assert [c.vector for c in localization(A, X, lp).characters] == fixtures.B2_CHARACTERS
    X = lp.layers[by_label(lp.poset, "(-1,-1)")]
    loc = localization(A, X, lp)
    assert loc.group is R and [c.vector for c in loc.characters] == [(1, 1), (1, -1)]
    T3 = build_layer_poset(fixtures.matrix_s("torus"))
    loc = localization(T3.arrangement, T3.layers[by_label(T3.poset, "(1,1,1)")], T3)
    assert [c.vector for c in loc.characters] == fixtures.MATRIX_S_COLUMNS
    with pytest.raises(LayerNotFound):
        localization(A, Layer(1, ((1, 0),), (Fraction(1, 3),)), lp)


def test_restriction_examples():
    lp = fixtures.b2_layers()
    A = lp.arrangement
    H = lp.layers[by_label(lp.poset, "t1t2^-1=1")]
    R3 = restriction_poset(A, H, lp)
    assert len(R3) == 3 and char_poly(R3) == PolyZ([-2, 1])
    with pytest.raises(AtomNotFound):
        restriction_poset(A, lp.layers[by_label(lp.poset, "(1,1)")], lp)
    # first row of the matrix S table: H1 alone, restricted to itself
    one = Arrangement("torus", 3, [fixtures.MATRIX_S_COLUMNS[0]])
    (h1,) = atom_layers(one.characters[0], T)
    Pr = restriction_poset(one, h1)
    assert len(Pr) == 1 and (0,) * (3 - 1 - Pr.rk) == (0, 0)
    S = build_layer_poset(fixtures.matrix_s("torus"))
    assert restriction_poset(S.arrangement, h1, S).rk == 2


def test_tm_condition_examples():
    A2 = Arrangement("torus", 3, [(1, -1, 0), (0, 1, -1), (1, 0, -1)])
    (X,) = atom_layers((1, -1, 0), T)
    assert check_arrangement_TM_condition(A2, A2.characters[:1], X, (0, 0, 1))
    B = fixtures.b2_torus()
    (t2,) = atom_layers((0, 1), T)
    assert check_arrangement_TM_condition(B, B.characters[1:2], t2, (1, 1))
    (t12,) = atom_layers((1, 1), T)
    assert not check_arrangement_TM_condition(B, B.characters[2:3], t12, (1, -1))


def test_classify_arrangement_examples():
    rep, _ = classify_arrangement(fixtures.b2_torus())
    assert rep.flags["inductive"] is True and sorted(rep.exponents) == [2, 2]
    rep, _ = classify_arrangement(fixtures.matrix_s("torus"))
    assert rep.flags["inductive"] is True and sorted(rep.exponents) == [2, 2, 2]
    rep, _ = classify_arrangement(fixtures.matrix_s("real"))
    assert rep.flags["divisional"] is False
