"""Posets of layers of central integral hyperplane and toric arrangements.

A layer is stored as (Λ, χ): Λ the saturated lattice of characters that
are constant on it, in Hermite form, and χ the values of those characters
as rationals mod 1 on the Hermite basis (a point φ of the torus satisfies
φ(λ) = exp(2πi χ(λ))).  For hyperplane arrangements χ is zero.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .classify import (ClassificationReport, Effort, InductionRow, InductionTable,
                       classification_report, factor_positive_integer_roots,
                       induction_table_failure)
from .errors import AtomNotFound, BudgetExceeded, LayerNotFound, ZeroCharacter
from .intlat import (Sublattice, content_and_primitive, inverse_unimodular, mat_mul,
                     smith_normal_form, solve_rational)
from .poset import Ground, Poset, PolyZ, char_poly, generated_by_mask, upper_set


class GroupKind(enum.Enum):
    REAL = "real"
    TORUS = "torus"

    @classmethod
    def parse(cls, s) -> "GroupKind":
        if isinstance(s, cls):
            return s
        return cls(str(s).lower())


@dataclass(frozen=True)
class Character:
    vector: tuple[int, ...]
    label: str = ""

    def __post_init__(self):
        if not any(self.vector):
            raise ZeroCharacter("characters must be nonzero")

    @property
    def content(self) -> int:
        return content_and_primitive(self.vector)[0]

    @property
    def primitive(self) -> tuple[int, ...]:
        return content_and_primitive(self.vector)[1]


@dataclass(frozen=True, order=True)
class Layer:
    rank: int
    basis: tuple[tuple[int, ...], ...]
    values: tuple[Fraction, ...]

    @property
    def lattice(self) -> Sublattice:
        return Sublattice(len(self.basis[0]) if self.basis else 0, self.basis)


def _mod1(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


@dataclass
class Arrangement:
    group: GroupKind
    dim: int
    characters: tuple[Character, ...]

    def __init__(self, group, dim: int, characters: Sequence, labels: Optional[Sequence[str]] = None):
        self.group = GroupKind.parse(group)
        self.dim = dim
        chars = []
        seen = set()
        for i, c in enumerate(characters):
            vec = tuple(int(x) for x in (c.vector if isinstance(c, Character) else c))
            if len(vec) != dim:
                raise ValueError(f"character {vec} has length {len(vec)}, expected {dim}")
            lab = labels[i] if labels else (c.label if isinstance(c, Character) else "")
            if vec in seen:
                warnings.warn(f"duplicate character {vec} dropped", stacklevel=2)
                continue
            seen.add(vec)
            chars.append(Character(vec, lab or _monomial(vec, self.group)))
        self.characters = tuple(chars)

    @property
    def rank(self) -> int:
        return Sublattice.span([c.vector for c in self.characters], self.dim).rank if self.characters else 0

    @property
    def essential(self) -> bool:
        return self.rank == self.dim

    def character_matrix(self) -> list[list[int]]:
        """Characters as columns."""
        return [[c.vector[i] for c in self.characters] for i in range(self.dim)]


# ---------------------------------------------------------------- layers

def _monomial(v: Sequence[int], group: GroupKind) -> str:
    parts = []
    if group is GroupKind.TORUS:
        for i, e in enumerate(v):
            if e == 0:
                continue
            parts.append(f"t{i + 1}" + ("" if e == 1 else f"^{e}"))
        return "".join(parts)
    for i, e in enumerate(v):
        if e == 0:
            continue
        sign = "-" if e < 0 else ("+" if parts else "")
        mag = "" if abs(e) == 1 else str(abs(e))
        parts.append(f"{sign}{mag}x{i + 1}")
    return "".join(parts)


def _root_of_unity(x: Fraction) -> str:
    if x == 0:
        return "1"
    if x == Fraction(1, 2):
        return "-1"
    return f"e({x.numerator}/{x.denominator})"


def layer_label(X: Layer, group: GroupKind, dim: int) -> str:
    if X.rank == 0:
        return "(S1)^%d" % dim if group is GroupKind.TORUS else "R^%d" % dim
    if X.rank == dim and group is GroupKind.TORUS:
        # the basis is the identity, so the values are the coordinates
        return "(" + ",".join(_root_of_unity(v) for v in X.values) + ")"
    if X.rank == dim:
        return "0"
    eqs = []
    for row, val in zip(X.basis, X.values):
        if group is GroupKind.TORUS:
            eqs.append(f"{_monomial(row, group)}={_root_of_unity(val)}")
        else:
            eqs.append(f"{_monomial(row, group)}=0")
    return ", ".join(eqs)


def bottom_layer() -> Layer:
    return Layer(0, (), ())


def atom_layers(c, group, dim: Optional[int] = None) -> list[Layer]:
    vec = tuple(c.vector if isinstance(c, Character) else c)
    if not any(vec):
        raise ZeroCharacter("characters must be nonzero")
    group = GroupKind.parse(group)
    d, prim = content_and_primitive(vec)
    basis = Sublattice.span([prim], len(vec)).basis
    # the Hermite row is ±prim; χ(prim) = k/d transfers with the sign
    sign = 1 if basis[0] == prim else -1
    if group is GroupKind.REAL:
        return [Layer(1, basis, (Fraction(0),))]
    return [Layer(1, basis, (_mod1(Fraction(sign * k, d)),)) for k in range(d)]


def _values_on(v: Sequence[int], X: Layer) -> Optional[Fraction]:
    """χ_X(v) mod 1 if v ∈ Λ_X, else None."""
    c = solve_rational(X.basis, v) if X.basis else ([] if not any(v) else None)
    if c is None or any(x.denominator != 1 for x in c):
        return None
    return _mod1(sum((x * y for x, y in zip(c, X.values)), Fraction(0)))


def layer_leq(X: Layer, Y: Layer) -> bool:
    """X <= Y in reverse inclusion: Λ_X ⊆ Λ_Y and χ_Y restricts to χ_X."""
    if X.rank > Y.rank:
        return False
    for row, val in zip(X.basis, X.values):
        w = _values_on(row, Y)
        if w is None or w != val:
            return False
    return True


def join_layers(X: Layer, Y: Layer, group) -> list[Layer]:
    """Connected components of the intersection X ∩ Y."""
    group = GroupKind.parse(group)
    if X.rank == 0:
        return [Y]
    if Y.rank == 0:
        return [X]
    rows = [list(r) for r in X.basis + Y.basis]
    vals = list(X.values + Y.values)
    dim = len(rows[0])
    snf = smith_normal_form(rows)
    k = snf.rank
    Lm = snf.left
    gen_vals = []
    for i in range(len(rows)):
        s = _mod1(sum((Lm[i][j] * vals[j] for j in range(len(rows))), Fraction(0)))
        if i >= k and s != 0:
            return []
        gen_vals.append(s)
    W = inverse_unimodular(snf.right)
    sat = Sublattice.span(W[:k], dim)
    if group is GroupKind.REAL:
        return [Layer(k, sat.basis, (Fraction(0),) * k)]
    coeff = [row[:k] for row in mat_mul(sat.basis, snf.right)]
    diag = snf.diagonal[:k]
    out = []
    offsets = [[]]
    for d in diag:
        offsets = [o + [m] for o in offsets for m in range(d)]
    for off in offsets:
        w_vals = [(gen_vals[i] + off[i]) / diag[i] for i in range(k)]
        h_vals = tuple(_mod1(sum((c * w for c, w in zip(crow, w_vals)), Fraction(0)))
                       for crow in coeff)
        out.append(Layer(k, sat.basis, h_vals))
    return sorted(set(out))


# ---------------------------------------------------------------- layer posets

@dataclass
class LayerPoset:
    poset: Poset
    layers: list[Layer]
    arrangement: Arrangement
    atom_character: dict[int, int]

    def element_of(self, X: Layer) -> int:
        try:
            return self._index[X]
        except AttributeError:
            self._index = {L: i for i, L in enumerate(self.layers)}
            return self.element_of(X)
        except KeyError:
            raise LayerNotFound(str(X)) from None

    def atoms_of_character(self, ci: int) -> list[int]:
        return [a for a, c in sorted(self.atom_character.items()) if c == ci]


def build_layer_poset(A: Arrangement, cap: Optional[int] = None,
                      trust_geometric: bool = True) -> LayerPoset:
    """Breadth-first closure of the layers under intersection with atoms.

    Covers are exactly the pairs (X, Y) with Y a component of X ∩ a for an
    atom a not below X; each is confirmed by the containment order test.
    ``trust_geometric`` marks the result locally geometric (layer posets
    are geometric posets), which enables faster subposet computations.
    """
    if cap is None:
        cap = Effort.from_env().max_elements
    group = A.group
    bottom = bottom_layer()
    atom_of: dict[Layer, int] = {}
    atoms: list[Layer] = []
    for ci, c in enumerate(A.characters):
        for L in atom_layers(c, group):
            if L not in atom_of:
                atom_of[L] = ci
                atoms.append(L)
    layers = {bottom: 0}
    covers: set[tuple[Layer, Layer]] = set()
    for L in atoms:
        layers.setdefault(L, 0)
        covers.add((bottom, L))
    level = sorted(set(atoms))
    while level:
        nxt = set()
        for X in level:
            for a in atoms:
                if layer_leq(a, X):
                    continue
                for Y in join_layers(X, a, group):
                    if Y.rank != X.rank + 1:
                        continue
                    covers.add((X, Y))
                    if Y not in layers:
                        layers[Y] = 0
                        nxt.add(Y)
                        if len(layers) > cap:
                            raise BudgetExceeded(cap)
        level = sorted(nxt)
    order = sorted(layers)
    index = {L: i for i, L in enumerate(order)}
    for X, Y in covers:
        assert layer_leq(X, Y)
    labels = [layer_label(L, group, A.dim) for L in order]
    ground = Ground(list(range(len(order))), labels, [L.rank for L in order],
                    sorted((index[X], index[Y]) for X, Y in covers))
    if trust_geometric:
        ground.locally_geometric = True
    ground.origin = "layers"
    P = Poset.whole(ground)
    atom_char = {index[L]: ci for L, ci in atom_of.items()}
    return LayerPoset(P, order, A, atom_char)


def char_poly_arrangement(A: Arrangement, lp: Optional[LayerPoset] = None) -> PolyZ:
    lp = lp or build_layer_poset(A)
    P = lp.poset
    return char_poly(P).shift(A.dim - P.rk)


def arrangement_exponents(A: Arrangement, lp: Optional[LayerPoset] = None) -> Optional[tuple[int, ...]]:
    lp = lp or build_layer_poset(A)
    ex = factor_positive_integer_roots(char_poly(lp.poset))
    if ex is None:
        return None
    return tuple(sorted((0,) * (A.dim - lp.poset.rk) + ex))


def localization(A: Arrangement, X: Layer, lp: Optional[LayerPoset] = None) -> Arrangement:
    """Hyperplane arrangement of the characters having a component through X."""
    lp = lp or build_layer_poset(A)
    x = lp.element_of(X)
    P = lp.poset
    keep = sorted({ci for a, ci in lp.atom_character.items() if P.leq(a, x)})
    return Arrangement(GroupKind.REAL, A.dim, [A.characters[ci].primitive for ci in keep],
                       [A.characters[ci].label for ci in keep])


def restriction_poset(A: Arrangement, H: Layer, lp: Optional[LayerPoset] = None) -> Poset:
    lp = lp or build_layer_poset(A)
    try:
        h = lp.element_of(H)
    except LayerNotFound:
        raise AtomNotFound(str(H)) from None
    if h not in lp.poset.atoms:
        raise AtomNotFound(str(H))
    return upper_set(lp.poset, h)


def check_arrangement_TM_condition(A: Arrangement, B, X: Layer, H) -> bool:
    """X meets the hypersurface of the character H in exactly one layer.

    H may be a character (all of its atom layers are joined with X) or a
    single atom layer.  B is accepted for symmetry with the definition; only
    X matters for the count.
    """
    hs = [H] if isinstance(H, Layer) else atom_layers(H, A.group)
    return sum(len(join_layers(X, h, A.group)) for h in hs) == 1


def classify_arrangement(A: Arrangement, effort: Optional[Effort] = None, mode: str = "exhaustive",
                         order: Optional[Sequence[int]] = None,
                         lp: Optional[LayerPoset] = None) -> tuple[ClassificationReport, LayerPoset]:
    effort = effort or Effort.from_env()
    lp = lp or build_layer_poset(A, effort.max_elements)
    rep = classification_report(lp.poset, effort, mode=mode, order=order, lg_known=True)
    return rep, lp


def _zero_counts(lp: LayerPoset, atoms: Sequence[int]) -> list[tuple[int, int]]:
    """Per row, the number of zero exponents of the deletion and of the restriction."""
    P = lp.poset
    dim = lp.arrangement.dim
    out = []
    bmask = 0
    for a in atoms:
        prev = generated_by_mask(P, bmask)
        bmask |= 1 << a
        Pr = upper_set(generated_by_mask(P, bmask), a)
        out.append((dim - prev.rk, dim - 1 - Pr.rk))
    return out


def arrangement_rows(lp: LayerPoset, table: InductionTable) -> list[tuple[tuple[int, ...], int, tuple[int, ...]]]:
    """Induction table rows with the zero exponents of the arrangements put back."""
    zs = _zero_counts(lp, [r.atom for r in table.rows])
    return [(tuple(sorted((0,) * zd + tuple(r.deletion))), r.atom,
             tuple(sorted((0,) * zr + tuple(r.restriction)))) for r, (zd, zr) in zip(table.rows, zs)]


def verify_arrangement_table(lp: LayerPoset, rows: Sequence) -> Optional[tuple[int, str]]:
    """Replay rows (deletion exponents, atom, restriction exponents) given at arrangement level.

    Returns None when the table is valid, else (row index, reason).
    """
    zs = _zero_counts(lp, [r[1] for r in rows])
    stripped = []
    for i, ((dele, a, rest), (zd, zr)) in enumerate(zip(rows, zs)):
        if list(dele).count(0) != zd or list(rest).count(0) != zr:
            return i, "number of zero exponents does not match the codimension"
        stripped.append(InductionRow(tuple(sorted(x for x in dele if x)), a,
                                     tuple(sorted(x for x in rest if x))))
    return induction_table_failure(lp.poset, stripped)
