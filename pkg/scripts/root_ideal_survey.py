"""Compare predicted and computed exponents over every ideal of Φ⁺(A/B/C) at small rank.

For type B every extension parameter p is tried as well.  Prints one summary
line per (type, rank, lattice) with the number of ideals checked, matches,
mismatches and cases the prediction refuses (no theorem applies).
"""

import argparse
import json
from collections import Counter
from dataclasses import dataclass, field

from layercraft.arrangement import arrangement_exponents, build_layer_poset
from layercraft.errors import InvalidExtensionParameter, NotCovered
from layercraft.rootsys import all_ideals, build_arrangement_from_ideal, extension, predicted_exponents


@dataclass
class Config:
    ranks: list[int] = field(default_factory=lambda: [2, 3])
    kinds: list[str] = field(default_factory=lambda: ["A", "B", "C"])
    extensions: bool = True
    out: str = ""


def variants(kind, I, l, extensions):
    yield I, None
    if kind == "B" and extensions:
        for p in range(1, l + 1):
            try:
                yield extension(I, p), p
            except InvalidExtensionParameter:
                pass


def main(cfg: Config):
    mismatches = []
    for kind in cfg.kinds:
        for l in cfg.ranks:
            for lattice in ("integer", "root"):
                c = Counter()
                for I in all_ideals(kind, l):
                    for J, p in variants(kind, I, l, cfg.extensions):
                        try:
                            pred = predicted_exponents(J, lattice)
                        except NotCovered:
                            c["not covered"] += 1
                            continue
                        except InvalidExtensionParameter:
                            c["invalid p"] += 1
                            continue
                        lp = build_layer_poset(build_arrangement_from_ideal(J, lattice))
                        comp = arrangement_exponents(lp.arrangement, lp)
                        if comp == pred:
                            c["match"] += 1
                        else:
                            c["mismatch"] += 1
                            mismatches.append({"type": kind, "rank": l, "lattice": lattice, "p": p,
                                               "ideal": I.labels(), "predicted": list(pred),
                                               "computed": None if comp is None else list(comp)})
                print(f"{kind}{l} {lattice:7s}: match {c['match']}, mismatch {c['mismatch']}, "
                      f"not covered {c['not covered']}, invalid p {c['invalid p']}")
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            json.dump(mismatches, fh, indent=2)
    return mismatches


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ranks", type=int, nargs="+", default=[2, 3])
    ap.add_argument("--kinds", nargs="+", default=["A", "B", "C"])
    ap.add_argument("--no-extensions", dest="extensions", action="store_false")
    ap.add_argument("--out", default="")
    main(Config(**vars(ap.parse_args())))
