"""Small hand-entered posets and arrangements used by the tests, CLI and scripts."""

from __future__ import annotations

from .arrangement import Arrangement, LayerPoset, build_layer_poset
from .poset import Poset, generated_subposet, validate

B2_CHARACTERS = [(1, 0), (0, 1), (1, 1), (1, -1)]

MATRIX_S_COLUMNS = [(1, 0, 0), (0, 1, 0), (1, 1, 0), (0, 0, 1), (1, 0, -1), (0, 1, -1)]

# rows of the induction table for the torus arrangement of S, arrangement exponents
# with zeros; atoms are named by the column they come from (0-based)
MATRIX_S_TABLE = [
    ((0, 0, 0), 0, (0, 0)),
    ((0, 0, 1), 1, (0, 1)),
    ((0, 1, 1), 2, (0, 1)),
    ((0, 1, 2), 3, (1, 2)),
    ((1, 1, 2), 5, (1, 2)),
    ((1, 2, 2), 4, (2, 2)),
]


def b2_torus() -> Arrangement:
    return Arrangement("torus", 2, B2_CHARACTERS)


def matrix_s(group: str = "torus") -> Arrangement:
    return Arrangement(group, 3, MATRIX_S_COLUMNS)


def pi3w() -> Poset:
    """Weighted partition poset of rank 2 with six atoms."""
    covers = [(0, a) for a in range(1, 7)]
    covers += [(a, 7) for a in (1, 2, 3)]
    covers += [(a, 9) for a in (4, 5, 6)]
    covers += [(a, 8) for a in range(1, 7)]
    return validate(list(range(10)), covers)


def ind_not_geo() -> Poset:
    """Inductive poset that is not geometric: x and y are the offending pair."""
    elements = ["0", "x", "a2", "a3", "a4", "u", "y", "v"]
    covers = [("0", "x"), ("0", "a2"), ("0", "a3"), ("0", "a4"),
              ("x", "u"), ("a2", "u"), ("a3", "y"), ("a4", "y"), ("a3", "v"), ("a4", "v")]
    return validate(elements, covers)


def b2_layers() -> LayerPoset:
    return build_layer_poset(b2_torus())


def d2_poset() -> Poset:
    """Subposet of the B2 layer poset generated by t1t2=1 and t1t2^-1=1."""
    lp = b2_layers()
    P = lp.poset
    atoms = [a for a in P.atoms if P.label(a) in ("t1t2=1", "t1t2^-1=1")]
    return generated_subposet(P, atoms)


def poset_fixtures() -> dict[str, Poset]:
    out = {
        "B2": b2_layers().poset,
        "S-torus": build_layer_poset(matrix_s("torus")).poset,
        "S-real": build_layer_poset(matrix_s("real")).poset,
        "pi3w": pi3w(),
        "D2": d2_poset(),
        "ind-not-geo": ind_not_geo(),
    }
    return out


def arrangement_fixtures() -> dict[str, Arrangement]:
    return {"B2": b2_torus(), "S-torus": matrix_s("torus"), "S-real": matrix_s("real")}
