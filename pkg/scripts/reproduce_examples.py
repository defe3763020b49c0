"""Recompute the worked examples: B2, matrix S, Π3^w, D2, B3, C2/C3, the C5 ideal and the B5 extension.

Prints one block per example with the numbers that the acceptance suite checks.
Pass --quick to skip the two rank-5 computations.
"""

import argparse
import time
from dataclasses import dataclass

from layercraft import fixtures, geometry
from layercraft.arrangement import (arrangement_exponents, build_layer_poset, classify_arrangement,
                                    localization, verify_arrangement_table)
from layercraft.classify import classification_report, is_inductive
from layercraft.poset import char_poly, is_isomorphic
from layercraft.rootsys import (build_arrangement_from_ideal, extension, full_ideal, guided_atom_order,
                                ideal_closure, predicted_exponents, sss_chain_masks)


@dataclass
class Config:
    quick: bool = False


def show(name, rep, P, t0):
    flags = ", ".join(f"{k}={v}" for k, v in rep.flags.items())
    print(f"{name}: {len(P)} elements {P.rank_counts()}, chi={rep.char_poly}, "
          f"exponents={rep.exponents} ({time.perf_counter() - t0:.2f}s)")
    print(f"  {flags}")


def by_label(P, label):
    (x,) = [x for x in P.elements if P.label(x) == label]
    return x


def main(cfg: Config):
    t0 = time.perf_counter()
    rep, lp = classify_arrangement(fixtures.b2_torus())
    show("B2 torus", rep, lp.poset, t0)

    t0 = time.perf_counter()
    rep, S = classify_arrangement(fixtures.matrix_s("torus"))
    show("matrix S torus", rep, S.poset, t0)
    rows = [(d, S.atoms_of_character(c)[0], r) for d, c, r in fixtures.MATRIX_S_TABLE]
    print(f"  figure induction table replays: {verify_arrangement_table(S, rows) is None}")

    t0 = time.perf_counter()
    rep, R = classify_arrangement(fixtures.matrix_s("real"))
    show("matrix S real", rep, R.poset, t0)
    loc = localization(S.arrangement, S.layers[by_label(S.poset, "(1,1,1)")], S)
    iso = is_isomorphic(build_layer_poset(loc).poset, R.poset) is not None
    print(f"  localization of the torus arrangement at (1,1,1) is isomorphic: {iso}")

    for name, P in (("pi3w", fixtures.pi3w()), ("D2", fixtures.d2_poset()),
                    ("ind-not-geo", fixtures.ind_not_geo())):
        t0 = time.perf_counter()
        show(name, classification_report(P), P, t0)

    t0 = time.perf_counter()
    B3 = full_ideal("B", 3)
    rep, lp = classify_arrangement(build_arrangement_from_ideal(B3, "integer"))
    show("B3 integer", rep, lp.poset, t0)
    root = build_layer_poset(build_arrangement_from_ideal(B3, "root")).poset
    print(f"  root and integer posets isomorphic: {is_isomorphic(lp.poset, root) is not None}")

    for l in (2, 3):
        for lattice in ("integer", "root"):
            t0 = time.perf_counter()
            rep, lp = classify_arrangement(build_arrangement_from_ideal(full_ideal("C", l), lattice))
            show(f"C{l} {lattice}", rep, lp.poset, t0)

    if cfg.quick:
        return
    t0 = time.perf_counter()
    I = ideal_closure("C", 5, ["e1-e5", "e2+e3"])
    li = build_layer_poset(build_arrangement_from_ideal(I, "integer"))
    chain = geometry.chain_from_masks(li.poset, sss_chain_masks(I, li))
    print(f"C5 ideal ({len(I)} roots) integer: {len(li.poset)} layers, "
          f"predicted {predicted_exponents(I, 'integer')}, "
          f"TM-chain by rows {None if chain is None else sorted(chain.exponents)} "
          f"({time.perf_counter() - t0:.1f}s)")
    t0 = time.perf_counter()
    lr = build_layer_poset(build_arrangement_from_ideal(I, "root"))
    tab = is_inductive(lr.poset, "guided", guided_atom_order(I, "root", lr))
    print(f"C5 ideal root: {len(lr.poset)} layers, predicted {predicted_exponents(I, 'root')}, "
          f"guided table {sorted(tab.exponents)} ({time.perf_counter() - t0:.1f}s)")

    t0 = time.perf_counter()
    J = extension(ideal_closure("B", 5, ["e1+e4", "e2+e3"]), 4)
    lp = build_layer_poset(build_arrangement_from_ideal(J, "integer"))
    tab = is_inductive(lp.poset, "guided", guided_atom_order(J, "integer", lp))
    print(f"B5 ideal, p=4 ({len(J)} roots): {len(lp.poset)} layers, predicted {predicted_exponents(J)}, "
          f"computed {arrangement_exponents(lp.arrangement, lp)}, guided table {sorted(tab.exponents)} "
          f"({time.perf_counter() - t0:.1f}s)")
    print(f"  chi = {char_poly(lp.poset)}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--quick", action="store_true")
    main(Config(**vars(ap.parse_args())))
