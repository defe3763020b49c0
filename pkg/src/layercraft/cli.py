"""Command-line front end: analyze, hasse, verify, search."""

from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Optional

import jsonschema

from . import fixtures, geometry, properties
from .arrangement import (Arrangement, LayerPoset, arrangement_rows, build_layer_poset,
                          classify_arrangement)
from .classify import (ClassificationReport, Effort, EffortExhausted, InductionTable,
                       classification_report, is_divisional, is_inductive)
from .errors import (BudgetExceeded, InternalInconsistency, LayercraftError, NotCovered)
from .poset import Poset, validate
from .rootsys import (RootIdeal, build_arrangement_from_ideal, extension, full_ideal,
                      guided_atom_order, ideal_closure, parse_root_expr, predicted_exponents,
                      sss_chain_masks, stats)

__all__ = ["main", "analyze", "hasse_dot", "load_input", "parse_root_expr",
           "INPUT_SCHEMA", "REPORT_SCHEMA", "SCHEMA_VERSION"]

SCHEMA_VERSION = 1

EXIT_OK, EXIT_INPUT, EXIT_BUDGET, EXIT_INCONSISTENT = 0, 1, 2, 3

_int_vector = {"type": "array", "items": {"type": "integer"}}

ARRANGEMENT_SCHEMA = {
    "type": "object",
    "properties": {
        "group": {"enum": ["real", "torus"]},
        "dim": {"type": "integer", "minimum": 0},
        "characters": {"type": "array", "items": _int_vector},
        "labels": {"type": "array", "items": {"type": "string"}},
    },
    "required": ["group", "dim", "characters"],
    "additionalProperties": False,
}

POSET_SCHEMA = {
    "type": "object",
    "properties": {
        "elements": {"type": "array", "items": {"type": ["string", "integer"]}, "minItems": 1},
        "covers": {"type": "array",
                   "items": {"type": "array", "items": {"type": ["string", "integer"]},
                             "minItems": 2, "maxItems": 2}},
        "labels": {"type": "object", "additionalProperties": {"type": "string"}},
    },
    "required": ["elements", "covers"],
    "additionalProperties": False,
}

ROOT_IDEAL_SCHEMA = {
    "type": "object",
    "properties": {
        "type": {"enum": ["A", "B", "C"]},
        "rank": {"type": "integer", "minimum": 1},
        "lattice": {"enum": ["root", "integer"]},
        "group": {"enum": ["real", "torus"]},
        "ideal": {"oneOf": [
            {"const": "full"},
            {"type": "object",
             "properties": {"generators": {"type": "array", "items": {"type": "string"}}},
             "required": ["generators"], "additionalProperties": False},
        ]},
        "extension_p": {"type": "integer", "minimum": 1},
    },
    "required": ["type", "rank", "lattice", "ideal"],
    "additionalProperties": False,
}

INPUT_SCHEMA = {"oneOf": [ARRANGEMENT_SCHEMA, POSET_SCHEMA, ROOT_IDEAL_SCHEMA]}

_flag = {"enum": [True, False, "skipped"]}
_multiset = {"type": ["array", "null"], "items": {"type": "integer"}}

REPORT_SCHEMA = {
    "type": "object",
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "kind": {"enum": ["arrangement", "poset", "root_ideal"]},
        "input": {"type": "object"},
        "poset": {
            "type": "object",
            "properties": {
                "elements": {"type": "integer"},
                "rank": {"type": "integer"},
                "rank_counts": {"type": "array", "items": {"type": "integer"}},
            },
            "required": ["elements", "rank", "rank_counts"],
            "additionalProperties": False,
        },
        "char_poly": {"type": "array", "items": {"type": "integer"}},
        "arrangement_char_poly": {"type": "array", "items": {"type": "integer"}},
        "flags": {"type": "object", "additionalProperties": _flag},
        "exponents": _multiset,
        "arrangement_exponents": _multiset,
        "certificates": {"type": "object"},
        "prediction": {"type": "object"},
        "statistics": {"type": "object"},
        "notes": {"type": "array", "items": {"type": "string"}},
    },
    "required": ["schema_version", "kind", "input", "poset", "char_poly", "flags",
                 "exponents", "certificates", "notes"],
    "additionalProperties": False,
}


# ---------------------------------------------------------------- input

def input_kind(spec: dict) -> str:
    if "characters" in spec:
        return "arrangement"
    if "elements" in spec:
        return "poset"
    return "root_ideal"


def load_input(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        spec = json.load(fh)
    if not isinstance(spec, dict):
        raise jsonschema.ValidationError("input must be a JSON object")
    # validate against the matching variant first for a readable message
    variant = {"arrangement": ARRANGEMENT_SCHEMA, "poset": POSET_SCHEMA,
               "root_ideal": ROOT_IDEAL_SCHEMA}[input_kind(spec)]
    jsonschema.validate(spec, variant)
    jsonschema.validate(spec, INPUT_SCHEMA)
    return spec


def root_ideal_from_spec(spec: dict) -> RootIdeal:
    kind, l = spec["type"], spec["rank"]
    if spec["ideal"] == "full":
        I = full_ideal(kind, l)
    else:
        gens = [parse_root_expr(g, kind, l) for g in spec["ideal"]["generators"]]
        I = ideal_closure(kind, l, gens)
    if spec.get("extension_p") is not None:
        I = extension(I, spec["extension_p"])
    return I


def build_from_spec(spec: dict, effort: Effort) -> tuple[Poset, Optional[LayerPoset], Optional[RootIdeal]]:
    kind = input_kind(spec)
    if kind == "poset":
        covers = [tuple(c) for c in spec["covers"]]
        return validate(spec["elements"], covers, spec.get("labels")), None, None
    if kind == "arrangement":
        A = Arrangement(spec["group"], spec["dim"], spec["characters"], spec.get("labels"))
        lp = build_layer_poset(A, effort.max_elements)
        return lp.poset, lp, None
    I = root_ideal_from_spec(spec)
    A = build_arrangement_from_ideal(I, spec["lattice"], spec.get("group", "torus"))
    lp = build_layer_poset(A, effort.max_elements)
    return lp.poset, lp, I


# ---------------------------------------------------------------- report

def _table_json(P: Poset, table: InductionTable, lp: Optional[LayerPoset]) -> dict:
    rows = [{"deletion": list(r.deletion), "atom": P.label(r.atom), "restriction": list(r.restriction)}
            for r in table.rows]
    out = {"rows": rows, "exponents": list(table.exponents)}
    if lp is not None:
        out["arrangement_rows"] = [{"deletion": list(d), "atom": P.label(a), "restriction": list(r)}
                                   for d, a, r in arrangement_rows(lp, table)]
    return out


def _chain_json(P: Poset, chain: geometry.ChainWitness) -> dict:
    return {"kind": chain.kind,
            "ideals": [[P.label(a) for a in w.atom_set] for w in chain.ideals],
            "d": list(chain.d)}


def _certificates_json(P: Poset, rep: ClassificationReport, lp: Optional[LayerPoset]) -> dict:
    out = {}
    c = rep.certificates
    if "induction_table" in c:
        out["induction_table"] = _table_json(P, c["induction_table"], lp)
    if "divisional_chain" in c:
        dc = c["divisional_chain"]
        out["divisional_chain"] = {"elements": [P.label(x) for x in dc.elements],
                                   "exponents": list(dc.exponents)}
    if "tm_chain" in c:
        out["tm_chain"] = _chain_json(P, c["tm_chain"])
    if "m_chain" in c and "tm_chain" not in c:
        out["m_chain"] = _chain_json(P, c["m_chain"])
    return out


def _stats_json(I: RootIdeal) -> dict:
    st = stats(I, I.p)
    return {
        "roots": len(I), "heights": list(st.heights), "dual_partition": list(st.dp),
        "b": [st.b[i] for i in sorted(st.b)], "b_plus": [st.b_plus[i] for i in sorted(st.b_plus)],
        "b_minus": [st.b_minus[i] for i in sorted(st.b_minus)],
        "n": st.n, "s": st.s, "a": st.a, "a_literal": st.a_literal, "t": st.t,
        "m": {str(k): v for k, v in sorted(st.m.items())}, "p": st.p, "notes": list(st.notes),
    }


def analyze(spec: dict, effort: Optional[Effort] = None, mode: str = "exhaustive") -> dict:
    """Full report for one validated input spec."""
    effort = effort or Effort.from_env()
    kind = input_kind(spec)
    P, lp, I = build_from_spec(spec, effort)
    order = None
    notes: list[str] = []
    theorem_chain = None
    if I is not None and mode == "guided":
        order = guided_atom_order(I, spec["lattice"], lp)
        if I.kind == "C" and spec["lattice"] == "integer":
            theorem_chain = geometry.chain_from_masks(P, sss_chain_masks(I, lp), tm=True)
    if lp is not None:
        rep, _ = classify_arrangement(lp.arrangement, effort, mode=mode, order=order, lp=lp)
    else:
        rep = classification_report(P, effort, mode=mode, order=order)
    notes += rep.notes
    out: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "kind": kind,
        "input": spec,
        "poset": {"elements": len(P), "rank": P.rk, "rank_counts": list(P.rank_counts())},
        "char_poly": list(rep.char_poly.coeffs),
        "flags": dict(rep.flags),
        "exponents": None if rep.exponents is None else list(rep.exponents),
        "certificates": _certificates_json(P, rep, lp),
        "notes": notes,
    }
    if theorem_chain is not None:
        out["certificates"]["tm_chain_by_rows"] = _chain_json(P, theorem_chain)
        if rep.flags.get("strictly_supersolvable") is False:
            raise InternalInconsistency("row chain is a TM-chain but the search found none")
        out["flags"]["strictly_supersolvable"] = True
    if lp is not None:
        dim = lp.arrangement.dim
        out["arrangement_char_poly"] = list(rep.char_poly.shift(dim - P.rk).coeffs)
        out["arrangement_exponents"] = (None if rep.exponents is None
                                        else sorted((0,) * (dim - P.rk) + tuple(rep.exponents)))
    if I is not None:
        out["statistics"] = _stats_json(I)
        try:
            pred = list(predicted_exponents(I, spec["lattice"]))
            out["prediction"] = {"covered": True, "predicted": pred,
                                 "computed": out["arrangement_exponents"],
                                 "match": pred == out["arrangement_exponents"]}
        except NotCovered as e:
            out["prediction"] = {"covered": False, "reason": str(e)}
    return out


def report_text(rep: dict) -> str:
    lines = [f"kind: {rep['kind']}",
             f"elements: {rep['poset']['elements']} (by rank {rep['poset']['rank_counts']})",
             f"char_poly (constant first): {rep['char_poly']}"]
    if "arrangement_char_poly" in rep:
        lines.append(f"arrangement char_poly: {rep['arrangement_char_poly']}")
    for k, v in rep["flags"].items():
        lines.append(f"  {k}: {v}")
    lines.append(f"exponents: {rep['exponents']}")
    if "arrangement_exponents" in rep:
        lines.append(f"arrangement exponents: {rep['arrangement_exponents']}")
    tab = rep["certificates"].get("induction_table")
    if tab:
        lines.append("induction table:")
        for r in tab.get("arrangement_rows", tab["rows"]):
            lines.append(f"  {r['deletion']}  {r['atom']}  {r['restriction']}")
    if "prediction" in rep:
        lines.append(f"prediction: {rep['prediction']}")
    for n in rep["notes"]:
        lines.append(f"note: {n}")
    return "\n".join(lines)


# ---------------------------------------------------------------- hasse

def hasse_dot(P: Poset, name: str = "layers") -> str:
    elems = P.elements
    idx = {x: k for k, x in enumerate(elems)}
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    for x in elems:
        lab = P.label(x).replace('"', '\\"')
        lines.append(f'  n{idx[x]} [label="{lab}"];')
    for r in range(P.rk + 1):
        same = " ".join(f"n{idx[x]};" for x in elems if P.rank(x) == r)
        lines.append(f"  {{ rank=same; {same} }}")
    for lo, hi in sorted((idx[a], idx[b]) for a, b in P.cover_pairs()):
        lines.append(f"  n{lo} -> n{hi};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- verify

SUITES = ("deletion-restriction", "sign-alternation", "inclusions", "tm-factor",
          "divisional-sum", "predicted")


def _arrangement_spec(A: Arrangement) -> dict:
    return {"group": A.group.value, "dim": A.dim, "characters": [list(c.vector) for c in A.characters]}


def _check_instance(job: tuple) -> tuple[str, list[str]]:
    suite, name, spec = job
    if spec is None:
        P = fixtures.poset_fixtures()[name]
        extra: list[str] = []
    else:
        A = Arrangement(spec["group"], spec["dim"], spec["characters"])
        lp = build_layer_poset(A)
        P = lp.poset
        extra = properties.arrangement_deletion_restriction(lp) if suite == "deletion-restriction" else []
    if suite == "tm-factor" and not geometry.is_locally_geometric(P):
        return name, []
    return name, properties.POSET_CHECKS[suite](P) + extra


def _minimize(suite: str, spec: dict) -> dict:
    """Drop characters one at a time while the failure persists."""
    chars = list(spec["characters"])
    changed = True
    while changed and len(chars) > 1:
        changed = False
        for k in range(len(chars)):
            trial = dict(spec, characters=chars[:k] + chars[k + 1:])
            if _check_instance((suite, "", trial))[1]:
                chars = trial["characters"]
                changed = True
                break
    return dict(spec, characters=chars)


def run_suite(suite: str, seed: int = 0, count: int = 200, jobs: int = 1) -> tuple[int, list[dict]]:
    """(instances checked, failures) for one property suite."""
    failures = []
    if suite == "predicted":
        ideals = properties.ideal_corpus(3, ("B", "C"))
        for I in ideals:
            for msg in properties.predicted_matches(I):
                failures.append({"instance": I.labels(), "message": msg})
        return len(ideals), failures
    rng = random.Random(seed)
    jobs_list = [(suite, name, None) for name in fixtures.poset_fixtures()]
    for k in range(count):
        A = properties.random_arrangement(rng)
        jobs_list.append((suite, f"random-{k}", _arrangement_spec(A)))
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            results = list(ex.map(_check_instance, jobs_list))
    else:
        results = [_check_instance(j) for j in jobs_list]
    for (s, name, spec), (_, msgs) in zip(jobs_list, results):
        if msgs:
            f = {"instance": name, "messages": msgs}
            if spec is not None:
                f["minimized"] = _minimize(suite, spec)
            failures.append(f)
    return len(jobs_list), failures


# ---------------------------------------------------------------- search

def search(max_atoms: int, seed: int = 0, count: int = 300) -> list[dict]:
    """Look for divisional, non-lattice layer posets that are not inductive."""
    rng = random.Random(seed)
    found = []
    seen = set()
    for _ in range(count):
        A = properties.random_arrangement(rng, max_dim=3, max_chars=max_atoms)
        key = (A.group, tuple(c.vector for c in A.characters))
        if key in seen:
            continue
        seen.add(key)
        try:
            lp = build_layer_poset(A, 2000)
        except BudgetExceeded:
            continue
        P = lp.poset
        if len(P.atoms) > max_atoms or geometry.is_lattice(P):
            continue
        if is_divisional(P) is None:
            continue
        if is_inductive(P) is None:
            found.append(_arrangement_spec(A))
    return found


# ---------------------------------------------------------------- main

def _write(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _effort(args) -> Effort:
    return Effort.from_env(max_elements=args.budget) if args.budget else Effort.from_env()


def _run(args) -> int:
    if args.command == "analyze":
        spec = load_input(args.input)
        rep = analyze(spec, _effort(args), args.mode)
        if args.format == "json":
            jsonschema.validate(rep, REPORT_SCHEMA)
            _write(json.dumps(rep, indent=2, sort_keys=True) + "\n", args.out)
        else:
            _write(report_text(rep) + "\n", args.out)
        return EXIT_OK
    if args.command == "hasse":
        spec = load_input(args.input)
        P, _, _ = build_from_spec(spec, _effort(args))
        _write(hasse_dot(P), args.out)
        return EXIT_OK
    if args.command == "verify":
        suites = SUITES if args.suite == "all" else (args.suite,)
        failed = False
        for s in suites:
            n, fails = run_suite(s, args.seed, args.count, args.jobs)
            print(f"{s}: {'PASS' if not fails else 'FAIL'} ({n} instances, {len(fails)} failures)")
            for f in fails:
                failed = True
                print(json.dumps(f, sort_keys=True))
        return EXIT_INCONSISTENT if failed else EXIT_OK
    if args.command == "search":
        found = search(args.max_atoms, args.seed, args.count)
        _write("".join(json.dumps(f, sort_keys=True) + "\n" for f in found), args.out)
        print(f"{len(found)} candidates", file=sys.stderr)
        return EXIT_OK
    raise AssertionError(args.command)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="layercraft", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="classify an arrangement, poset or root ideal")
    a.add_argument("input")
    a.add_argument("--format", choices=["json", "text"], default="json")
    a.add_argument("--budget", type=int, default=None, help="element cap")
    a.add_argument("--mode", choices=["exhaustive", "guided"], default="exhaustive")
    a.add_argument("--out")

    h = sub.add_parser("hasse", help="emit the Hasse diagram as DOT")
    h.add_argument("input")
    h.add_argument("--budget", type=int, default=None)
    h.add_argument("--out")

    v = sub.add_parser("verify", help="run property suites")
    v.add_argument("--suite", choices=SUITES + ("all",), default="all")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--count", type=int, default=200)
    v.add_argument("--jobs", type=int, default=1)

    s = sub.add_parser("search", help="look for divisional non-inductive non-lattice posets")
    s.add_argument("--max-atoms", type=int, default=4)
    s.add_argument("--count", type=int, default=300)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except (BudgetExceeded, EffortExhausted) as e:
        print(f"error: {e or 'step budget exhausted'}", file=sys.stderr)
        return EXIT_BUDGET
    except InternalInconsistency as e:
        print(f"internal inconsistency: {e}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except jsonschema.ValidationError as e:
        print(f"invalid input: {e.message}", file=sys.stderr)
        return EXIT_INPUT
    except (LayercraftError, json.JSONDecodeError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
