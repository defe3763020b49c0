"""Property checks shared by the verify command and the test suite.

Each check takes a poset (or arrangement) and returns a list of failure
messages; an empty list means the property holds.
"""

from __future__ import annotations

import random
from typing import Callable, Optional

from . import geometry
from .arrangement import Arrangement, LayerPoset, build_layer_poset
from .classify import (Effort, check_implications, classification_report,
                       deletion_restriction_residual, factor_positive_integer_roots,
                       is_divisional)
from .errors import InternalInconsistency, NotCovered
from .poset import Poset, PolyZ, char_poly, generated_by_mask, is_isomorphic, upper_set
from .rootsys import RootIdeal, all_ideals, build_arrangement_from_ideal, predicted_exponents


def deletion_restriction(P: Poset) -> list[str]:
    out = []
    for a in P.atoms:
        r = deletion_restriction_residual(P, a)
        if not r.is_zero():
            out.append(f"atom {P.label(a)}: residual {r}")
    return out


def arrangement_deletion_restriction(lp: LayerPoset) -> list[str]:
    """χ_A = χ_A' − χ_A'' with all three at arrangement level (degrees ℓ, ℓ, ℓ−1)."""
    P = lp.poset
    dim = lp.arrangement.dim
    chi = char_poly(P).shift(dim - P.rk)
    out = []
    for a in P.atoms:
        Pd = generated_by_mask(P, P.atom_mask & ~(1 << a))
        Pr = upper_set(P, a)
        rhs = char_poly(Pd).shift(dim - Pd.rk) - char_poly(Pr).shift(dim - 1 - Pr.rk)
        if rhs != chi:
            out.append(f"atom {P.label(a)}: {chi} != {rhs}")
    return out


def sign_alternation(P: Poset) -> list[str]:
    c = char_poly(P).coeffs
    r = P.rk
    bad = [i for i in range(r + 1) if not (-1) ** (r - i) * (c[i] if i < len(c) else 0) > 0]
    return [f"coefficient of t^{i} has the wrong sign in {char_poly(P)}" for i in bad]


def inclusions(P: Poset, effort: Optional[Effort] = None) -> list[str]:
    try:
        rep = classification_report(P, effort or Effort())
        check_implications(rep.flags)
    except InternalInconsistency as e:
        return [str(e)]
    return []


def tm_factor(P: Poset, limit: int = 20) -> list[str]:
    """Every TM-ideal Q of corank one gives χ_P = (t−d)χ_Q and P_{>=a} ≅ Q."""
    out = []
    for k, w in enumerate(geometry.ideal_candidates(P, tm=True)):
        if k >= limit:
            break
        Q = w.view(P)
        outside = [a for a in P.atoms if a not in set(w.atom_set)]
        d = len(outside)
        if char_poly(P) != PolyZ([-d, 1]) * char_poly(Q):
            out.append(f"TM-ideal on {w.atom_set}: χ does not split off (t-{d})")
        for a in outside:
            if is_isomorphic(Q, upper_set(P, a)) is None:
                out.append(f"TM-ideal on {w.atom_set}: upper set of {P.label(a)} not isomorphic to it")
    return out


def divisional_sum(P: Poset) -> list[str]:
    dc = is_divisional(P)
    if dc is None:
        return []
    if sum(dc.exponents) != len(P.atoms):
        return [f"divisional exponents {dc.exponents} do not sum to {len(P.atoms)} atoms"]
    return []


def predicted_matches(I: RootIdeal, lattices=("integer", "root")) -> list[str]:
    out = []
    for lat in lattices:
        try:
            pred = predicted_exponents(I, lat)
        except NotCovered as e:
            out.append(f"{I.kind}{I.rank} {I.labels()} {lat}: not covered ({e})")
            continue
        A = build_arrangement_from_ideal(I, lat)
        lp = build_layer_poset(A)
        ex = factor_positive_integer_roots(char_poly(lp.poset))
        comp = None if ex is None else tuple(sorted((0,) * (A.dim - lp.poset.rk) + ex))
        if comp != pred:
            out.append(f"{I.kind}{I.rank} {I.labels()} {lat}: predicted {pred}, computed {comp}")
        if sum(pred) != len(lp.poset.atoms):
            out.append(f"{I.kind}{I.rank} {I.labels()} {lat}: exponent sum {sum(pred)} "
                       f"!= {len(lp.poset.atoms)} atoms")
    return out


POSET_CHECKS: dict[str, Callable[[Poset], list[str]]] = {
    "deletion-restriction": deletion_restriction,
    "sign-alternation": sign_alternation,
    "inclusions": inclusions,
    "tm-factor": tm_factor,
    "divisional-sum": divisional_sum,
}


def random_arrangement(rng: random.Random, max_dim: int = 3, max_chars: int = 4,
                       bound: int = 2) -> Arrangement:
    dim = rng.randint(1, max_dim)
    k = rng.randint(1, max_chars)
    chars: list[tuple[int, ...]] = []
    while len(chars) < k:
        v = tuple(rng.randint(-bound, bound) for _ in range(dim))
        if any(v) and v not in chars:
            chars.append(v)
    return Arrangement(rng.choice(["torus", "real"]), dim, chars)


def ideal_corpus(rank: int = 3, kinds=("B", "C")) -> list[RootIdeal]:
    return [I for k in kinds for I in all_ideals(k, rank)]
