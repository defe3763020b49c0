"""Factorable, divisional and inductive posets, with certificates.

Searches run on ``Poset`` views of one ambient ground, so a state is the
pair (bottom element, element mask) and memo tables live on the ground.
"""

from __future__ import annotations

import os
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from . import geometry
from .errors import (AtomNotFound, DivisibilityFailed, InternalInconsistency, NotMonic)
from .poset import Poset, PolyZ, char_poly, generated_by_mask, upper_set

DEFAULT_ELEMENT_CAP = 200_000
DEFAULT_STEP_BUDGET = 200_000


class EffortExhausted(Exception):
    pass


@dataclass
class Effort:
    """Element cap and step budget shared by one analysis."""
    max_elements: int = DEFAULT_ELEMENT_CAP
    max_steps: int = DEFAULT_STEP_BUDGET
    steps: int = 0

    @classmethod
    def from_env(cls, **kw) -> "Effort":
        env = os.environ.get("LAYERCRAFT_BUDGET")
        if env and "max_elements" not in kw:
            kw["max_elements"] = int(env)
        return cls(**kw)

    def tick(self, n: int = 1) -> None:
        self.steps += n
        if self.steps > self.max_steps:
            raise EffortExhausted()


def _multiset(xs) -> tuple[int, ...]:
    return tuple(sorted(xs))


# ---------------------------------------------------------------- triples

def triple(P: Poset, a: int) -> tuple[Poset, Poset]:
    """(P', P''): deletion P(A \\ {a}) and restriction P_{>=a}."""
    if a not in P.atoms:
        raise AtomNotFound(P.id(a) if a in P else a)
    return generated_by_mask(P, P.atom_mask & ~(1 << a)), upper_set(P, a)


def deletion_restriction_residual(P: Poset, a: int) -> PolyZ:
    geometry.require_locally_geometric(P)
    Pd, Pr = triple(P, a)
    eps = P.rk - Pd.rk
    return char_poly(P) - (char_poly(Pd).shift(eps) - char_poly(Pr))


# ---------------------------------------------------------------- factoring

def factor_positive_integer_roots(p: PolyZ) -> Optional[tuple[int, ...]]:
    """Exponents d_i with p = prod (t - d_i), all d_i positive integers, else None."""
    if not p.is_monic():
        raise NotMonic(f"{p} is not monic")
    roots: list[int] = []
    while p.degree > 0:
        c0 = p.coeffs[0]
        if c0 == 0:
            return None
        for d in _divisors(abs(c0)):
            q, r = p.divmod(PolyZ([-d, 1]))
            if r.is_zero():
                roots.append(d)
                p = q
                break
        else:
            return None
    return _multiset(roots)


def _divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


# ---------------------------------------------------------------- divisional

@dataclass
class DivisionalChain:
    elements: list[int]
    exponents: list[int]


def is_divisional(P: Poset, effort: Optional[Effort] = None) -> Optional[DivisionalChain]:
    geometry.require_locally_geometric(P)
    memo = P.ground.memo.setdefault("div", {})

    def search(Q: Poset) -> Optional[list[int]]:
        key = (Q.bottom, Q.mask)
        if key in memo:
            return memo[key]
        if effort:
            effort.tick()
        res = None
        if Q.rk == 0:
            res = []
        else:
            chi = char_poly(Q)
            for a in Q.atoms:
                U = upper_set(Q, a)
                if char_poly(U).divides(chi):
                    sub = search(U)
                    if sub is not None:
                        res = [a] + sub
                        break
        memo[key] = res
        return res

    path = search(P)
    if path is None:
        return None
    chain = [P.bottom] + path
    counts = [len(upper_set(P, x).atoms) if x != P.bottom else len(P.atoms) for x in chain]
    d = [counts[i] - counts[i + 1] for i in range(len(chain) - 1)]
    return DivisionalChain(chain, d)


# ---------------------------------------------------------------- inductive

@dataclass
class InductionRow:
    deletion: tuple[int, ...]
    atom: int
    restriction: tuple[int, ...]
    restriction_table: Optional["InductionTable"] = None


@dataclass
class InductionTable:
    rows: list[InductionRow]
    exponents: tuple[int, ...]
    bottom: int = 0

    def atoms(self) -> list[int]:
        return [r.atom for r in self.rows]


def _add_rule(dele: tuple[int, ...], rest: tuple[int, ...], separator: bool) -> Optional[tuple[int, ...]]:
    if separator:
        if Counter(rest) != Counter(dele):
            return None
        return _multiset(dele + (1,))
    diff = Counter(dele) - Counter(rest)
    if sum(diff.values()) != 1 or Counter(rest) - Counter(dele):
        return None
    d = next(iter(diff))
    out = Counter(dele)
    out[d] -= 1
    out[d + 1] += 1
    return _multiset(out.elements())


def _trivial_table(P: Poset) -> InductionTable:
    return InductionTable([], (), P.bottom)


def _inductive_exhaustive(P: Poset, effort: Optional[Effort], memo: dict) -> Optional[InductionTable]:
    key = (P.bottom, P.mask)
    if key in memo:
        return memo[key]
    if effort:
        effort.tick()
    if P.rk == 0:
        memo[key] = _trivial_table(P)
        return memo[key]
    res = None
    if factor_positive_integer_roots(char_poly(P)) is not None:
        amask = P.atom_mask
        for a in P.atoms:
            Pd = generated_by_mask(P, amask & ~(1 << a))
            Pr = upper_set(P, a)
            chi_r = char_poly(Pr)
            if not chi_r.divides(char_poly(Pd)):
                continue
            tr = _inductive_exhaustive(Pr, effort, memo)
            if tr is None:
                continue
            td = _inductive_exhaustive(Pd, effort, memo)
            if td is None:
                continue
            exps = _add_rule(td.exponents, tr.exponents, P.rk != Pd.rk)
            if exps is None:
                raise InternalInconsistency("divisibility held but the addition rule failed")
            res = InductionTable(td.rows + [InductionRow(td.exponents, a, tr.exponents, tr)],
                                 exps, P.bottom)
            break
    memo[key] = res
    return res


def _inherited_order(P: Poset, Pi: Poset, a: int, earlier: Sequence[int]) -> list[int]:
    # atoms of the restriction at a, ranked by the first earlier atom producing them
    g = P.ground
    Pr = upper_set(Pi, a)
    pos = {}
    for j, b in enumerate(earlier):
        for c in Pr.atoms:
            if c not in pos and g.down[c] >> b & 1:
                pos[c] = j
    return sorted(Pr.atoms, key=lambda c: (pos.get(c, len(earlier)), c))


def _restriction_inductive(Pr: Poset, order: Optional[list[int]], effort: Optional[Effort],
                           memo: dict) -> Optional[InductionTable]:
    key = (Pr.bottom, Pr.mask)
    if key in memo:
        return memo[key]
    res = None
    if order is not None:
        try:
            res = _guided(Pr, order, effort, memo)
        except DivisibilityFailed:
            res = None
    if res is None:
        res = _inductive_exhaustive(Pr, effort, memo)
    memo[key] = res
    return res


def _guided(P: Poset, order: Sequence[int], effort: Optional[Effort], memo: dict) -> InductionTable:
    order = list(order)
    if sorted(order) != sorted(P.atoms):
        raise ValueError("guided order must list every atom exactly once")
    rows: list[InductionRow] = []
    exps: tuple[int, ...] = ()
    bmask = 0
    prev = generated_by_mask(P, 0)
    for i, a in enumerate(order):
        if effort:
            effort.tick()
        bmask |= 1 << a
        Pi = generated_by_mask(P, bmask)
        Pr = upper_set(Pi, a)
        if not char_poly(Pr).divides(char_poly(prev)):
            raise DivisibilityFailed(i + 1, "restriction polynomial does not divide deletion polynomial")
        sub_order = _inherited_order(P, Pi, a, order[:i]) if Pr.rk > 0 else []
        tr = _restriction_inductive(Pr, sub_order, effort, memo)
        if tr is None:
            raise DivisibilityFailed(i + 1, "restriction is not inductive")
        new = _add_rule(exps, tr.exponents, Pi.rk != prev.rk)
        if new is None:
            raise InternalInconsistency("divisibility held but the addition rule failed")
        rows.append(InductionRow(exps, a, tr.exponents, tr))
        exps = new
        prev = Pi
    return InductionTable(rows, exps, P.bottom)


def is_inductive(P: Poset, mode: str = "exhaustive", order: Optional[Sequence[int]] = None,
                 effort: Optional[Effort] = None) -> Optional[InductionTable]:
    """Induction table certifying P inductive, or None.

    mode "guided" adds atoms in ``order`` and raises DivisibilityFailed(step)
    when that order does not work; restrictions are certified recursively
    (inherited order first, then exhaustive search).
    """
    geometry.require_locally_geometric(P)
    memo = P.ground.memo.setdefault("ind", {})
    if mode == "guided":
        if order is None:
            raise ValueError("guided mode needs an atom order")
        return _guided(P, order, effort, memo)
    if mode != "exhaustive":
        raise ValueError(f"unknown mode {mode!r}")
    return _inductive_exhaustive(P, effort, memo)


def is_inductive_unmemoized(P: Poset) -> bool:
    """Plain recursion on the definition, no memo (small posets only)."""
    if P.rk == 0:
        return True
    amask = P.atom_mask
    for a in P.atoms:
        Pd = generated_by_mask(P, amask & ~(1 << a))
        Pr = upper_set(P, a)
        if char_poly(Pr).divides(char_poly(Pd)) and is_inductive_unmemoized(Pr) \
                and is_inductive_unmemoized(Pd):
            return True
    return False


def table_from_chain(P: Poset, chain: geometry.ChainWitness) -> list[int]:
    """Atom order of a TM-chain: atoms of Q_1, then those of Q_2 not in Q_1, and so on."""
    order: list[int] = []
    seen: set[int] = set()
    for w in chain.ideals[1:]:
        for a in w.atom_set:
            if a not in seen:
                seen.add(a)
                order.append(a)
    for a in P.atoms:
        if a not in seen:
            order.append(a)
    return order


# ---------------------------------------------------------------- table replay

def induction_table_failure(P: Poset, table: Union[InductionTable, Sequence]) -> Optional[tuple[int, str]]:
    """(row index, reason) of the first row that does not replay, or None."""
    if isinstance(table, InductionTable):
        rows, final = table.rows, table.exponents
    else:
        rows = [r if isinstance(r, InductionRow) else InductionRow(tuple(r[0]), r[1], tuple(r[2]))
                for r in table]
        final = None
    atoms = set(P.atoms)
    exps: tuple[int, ...] = ()
    bmask = 0
    prev = generated_by_mask(P, 0)
    memo = P.ground.memo.setdefault("ind", {})
    for i, row in enumerate(rows):
        a = row.atom
        if a not in atoms or bmask >> a & 1:
            return i, "atom is not a new atom of the poset"
        if _multiset(row.deletion) != exps:
            return i, "recorded deletion exponents differ from the replayed ones"
        bmask |= 1 << a
        Pi = generated_by_mask(P, bmask)
        Pr = upper_set(Pi, a)
        chi_r = char_poly(Pr)
        if not chi_r.divides(char_poly(prev)):
            return i, "restriction polynomial does not divide deletion polynomial"
        if chi_r != PolyZ.from_roots(row.restriction):
            return i, "recorded restriction exponents do not match its polynomial"
        if row.restriction_table is not None:
            sub = induction_table_failure(Pr, row.restriction_table)
            if sub is not None:
                return i, f"restriction certificate fails at its row {sub[0]}: {sub[1]}"
        elif _inductive_exhaustive(Pr, None, memo) is None:
            return i, "restriction is not inductive"
        new = _add_rule(exps, _multiset(row.restriction), Pi.rk != prev.rk)
        if new is None:
            return i, "addition rule does not apply"
        if char_poly(Pi) != PolyZ.from_roots(new):
            return i, "exponents do not factor the characteristic polynomial"
        exps = new
        prev = Pi
    if bmask != P.atom_mask:
        return len(rows), "table does not add every atom"
    if final is not None and _multiset(final) != exps:
        return len(rows), "final exponents differ"
    return None


def verify_induction_table(P: Poset, table) -> bool:
    return induction_table_failure(P, table) is None


# ---------------------------------------------------------------- report

FLAGS = ("locally_geometric", "geometric", "lattice", "factorable", "divisional",
         "inductive", "supersolvable", "strictly_supersolvable")

SKIPPED = "skipped"


@dataclass
class ClassificationReport:
    flags: dict
    char_poly: PolyZ
    exponents: Optional[tuple[int, ...]]
    certificates: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)


def check_implications(flags: dict) -> None:
    """Raise if a decided flag contradicts SSS => IP => DP => factorable."""
    chain = ["strictly_supersolvable", "inductive", "divisional", "factorable"]
    for k, hi in enumerate(chain):
        for lo in chain[k + 1:]:
            if flags.get(hi) is True and flags.get(lo) is False:
                raise InternalInconsistency(f"{hi} holds but {lo} fails")


def classification_report(P: Poset, effort: Optional[Effort] = None, mode: str = "exhaustive",
                          order: Optional[Sequence[int]] = None,
                          lg_known: bool = False) -> ClassificationReport:
    """Run every predicate within the effort limits.

    ``lg_known`` records that local geometricity holds for a reason outside
    this poset (layer posets are geometric); the check itself is then only
    run when it fits the budget.
    """
    effort = effort or Effort.from_env()
    n = len(P)
    flags: dict = {}
    certs: dict = {}
    notes: list = []
    pair_cost = n * (n - 1) // 2

    def run(name, fn):
        start = effort.steps
        try:
            return fn()
        except EffortExhausted:
            notes.append(f"{name}: step budget exhausted")
            effort.steps = start
            return SKIPPED

    if n > effort.max_elements:
        flags = {k: SKIPPED for k in FLAGS}
        chi = char_poly(P)
        ex = factor_positive_integer_roots(chi)
        flags["factorable"] = ex is not None
        return ClassificationReport(flags, chi, ex, certs, ["element cap exceeded"])

    if P.ground.locally_geometric and P.simple:
        flags["locally_geometric"] = True
    elif pair_cost <= effort.max_steps * 50:
        flags["locally_geometric"] = geometry.is_locally_geometric(P)
    else:
        flags["locally_geometric"] = SKIPPED
    lg = flags["locally_geometric"] is True or lg_known
    if lg_known and flags["locally_geometric"] is SKIPPED:
        notes.append("locally_geometric: assumed from construction")

    if len(P.maximal) != 1:
        flags["lattice"] = False
    elif pair_cost <= effort.max_steps * 50:
        flags["lattice"] = geometry.is_lattice(P)
    else:
        flags["lattice"] = SKIPPED

    chi = char_poly(P)
    ex = factor_positive_integer_roots(chi)
    flags["factorable"] = ex is not None

    if not lg:
        for k in ("geometric", "divisional", "inductive", "supersolvable", "strictly_supersolvable"):
            flags[k] = SKIPPED if flags["locally_geometric"] is SKIPPED else False
        if flags["locally_geometric"] is False:
            notes.append("not locally geometric: the classes are defined for locally geometric posets")
        check_implications(flags)
        return ClassificationReport(flags, chi, ex, certs, notes)

    if lg_known and P.ground.locally_geometric is None and P.is_full():
        P.ground.locally_geometric = True

    flags["geometric"] = run("geometric", lambda: geometry.is_geometric_poset(P))

    dc = run("divisional", lambda: is_divisional(P, effort))
    flags["divisional"] = dc if dc is SKIPPED else dc is not None
    if dc not in (None, SKIPPED):
        certs["divisional_chain"] = dc

    ssc = run("strictly_supersolvable", lambda: geometry.is_strictly_supersolvable(P))
    flags["strictly_supersolvable"] = ssc if ssc is SKIPPED else ssc is not None
    if ssc not in (None, SKIPPED):
        certs["tm_chain"] = ssc
        flags["supersolvable"] = True
        certs["m_chain"] = ssc
    else:
        sc = run("supersolvable", lambda: geometry.is_supersolvable(P))
        flags["supersolvable"] = sc if sc is SKIPPED else sc is not None
        if sc not in (None, SKIPPED):
            certs["m_chain"] = sc

    if mode == "guided" and order is None and ssc not in (None, SKIPPED):
        order = table_from_chain(P, ssc)
    if mode == "guided" and order is not None:
        try:
            tab = run("inductive", lambda: is_inductive(P, "guided", order, effort))
        except DivisibilityFailed as e:
            notes.append(f"guided order failed: {e}")
            tab = run("inductive", lambda: is_inductive(P, "exhaustive", effort=effort))
    else:
        tab = run("inductive", lambda: is_inductive(P, "exhaustive", effort=effort))
    if tab is SKIPPED and ssc not in (None, SKIPPED):
        tab = run("inductive", lambda: is_inductive(P, "guided", table_from_chain(P, ssc), effort))
    flags["inductive"] = tab if tab is SKIPPED else tab is not None
    if tab not in (None, SKIPPED):
        certs["induction_table"] = tab

    check_implications(flags)
    if tab not in (None, SKIPPED) and tab.exponents != ex:
        raise InternalInconsistency("induction table exponents differ from the factorization")
    if dc not in (None, SKIPPED):
        if _multiset(dc.exponents) != ex:
            raise InternalInconsistency("divisional chain exponents differ from the factorization")
    if ssc not in (None, SKIPPED) and _multiset(ssc.d) != ex:
        raise InternalInconsistency("TM-chain exponents differ from the factorization")
    return ClassificationReport(flags, chi, ex, certs, notes)
