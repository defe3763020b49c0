"""Lattice-theoretic predicates, M-/TM-ideals and supersolvability.

All predicates take ``Poset`` views.  Joins and meets are read off the
bitset up/down sets: in a lattice whose elements are indexed along a
rank-sorted linear extension, the least element of a set of upper bounds
is its lowest set bit and the greatest lower bound its highest one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Sequence

from .errors import NotALattice, NotLocallyGeometric
from .poset import (Poset, bits, closure_mask, join_mask,
                    lower_interval, maximal_of, minimal_of)


def _popcount(m: int) -> int:
    return bin(m).count("1")


def _least(g, m: int) -> Optional[int]:
    """The least element of the set m, if it has one."""
    if not m:
        return None
    w = (m & -m).bit_length() - 1
    return w if m & ~g.up[w] == 0 else None


def _greatest(g, m: int) -> Optional[int]:
    if not m:
        return None
    w = m.bit_length() - 1
    return w if m & ~g.down[w] == 0 else None


def lattice_join(L: Poset, u: int, v: int) -> int:
    g = L.ground
    w = _least(g, g.up[u] & g.up[v] & L.mask)
    if w is None:
        raise NotALattice(f"{L.id(u)!r} and {L.id(v)!r} have no unique join")
    return w


def lattice_meet(L: Poset, u: int, v: int) -> int:
    g = L.ground
    w = _greatest(g, g.down[u] & g.down[v] & L.mask)
    if w is None:
        raise NotALattice(f"{L.id(u)!r} and {L.id(v)!r} have no unique meet")
    return w


# ---------------------------------------------------------------- lattices

def is_lattice(P: Poset) -> bool:
    g = P.ground
    if len(P.maximal) != 1:
        return False
    els = P.elements
    for i, u in enumerate(els):
        for v in els[i + 1:]:
            if P.leq(u, v) or P.leq(v, u):
                continue
            if _least(g, g.up[u] & g.up[v] & P.mask) is None:
                return False
            if _greatest(g, g.down[u] & g.down[v] & P.mask) is None:
                return False
    return True


def _cover_atom_property(L: Poset) -> bool:
    # x ⋖ y  <=>  y = x ∨ a for some atom a not below x, assuming L is a lattice
    g = L.ground
    amask = L.atom_mask
    for u in L.elements:
        ru = L.rank(u)
        for a in bits(amask & ~g.down[u]):
            w = lattice_join(L, u, a)
            if L.rank(w) != ru + 1:
                return False
        for y in L.covers_up(u):
            if not g.down[y] & amask & ~g.down[u]:
                return False
    return True


def is_geometric_lattice(L: Poset) -> bool:
    if not is_lattice(L):
        raise NotALattice("not a lattice")
    return _cover_atom_property(L)


def is_locally_geometric_by_intervals(P: Poset) -> bool:
    """Direct check: every lower interval is a geometric lattice."""
    for x in P.elements:
        L = lower_interval(P, x)
        if not is_lattice(L) or not _cover_atom_property(L):
            return False
    return True


def is_locally_geometric(P: Poset) -> bool:
    """True iff every lower interval P_{<=x} is a geometric lattice.

    Checked globally: (i) for each pair u, v no element lies above two
    distinct minimal upper bounds (so every P_{<=x} has joins, hence is a
    lattice); (ii) every minimal upper bound of an element u and an atom
    not below u has rank rk(u)+1; (iii) every cover adds an atom.
    """
    g = P.ground
    key = ("lg", P.bottom, P.mask)
    if key in g.memo:
        return g.memo[key]
    if g.locally_geometric and P.simple:
        return True
    res = _is_locally_geometric(P)
    g.memo[key] = res
    if P.is_full():
        g.locally_geometric = res
    return res


def _is_locally_geometric(P: Poset) -> bool:
    g = P.ground
    amask = P.atom_mask
    for u in P.elements:
        ru = P.rank(u)
        for a in bits(amask & ~g.down[u]):
            for m in bits(minimal_of(g, g.up[u] & g.up[a] & P.mask)):
                if P.rank(m) != ru + 1:
                    return False
        for y in P.covers_up(u):
            if not g.down[y] & amask & ~g.down[u]:
                return False
    els = P.elements
    for i, u in enumerate(els):
        du = g.up[u] & P.mask
        for v in els[i + 1:]:
            s = du & g.up[v]
            if not s or s >> u & 1 or s >> v & 1:
                continue
            mins = list(bits(minimal_of(g, s)))
            for x, y in combinations(mins, 2):
                if g.up[x] & g.up[y] & P.mask:
                    return False
    return True


def require_locally_geometric(P: Poset) -> None:
    if not is_locally_geometric(P):
        raise NotLocallyGeometric("poset is not locally geometric")


def is_geometric_poset(P: Poset) -> bool:
    """Atom-compatibility condition on top of local geometricity.

    For x, the bad atoms are those below x or with empty join with x.  The
    condition fails exactly when some element of rank > rk(x) is spanned by
    bad atoms, i.e. lies in the subposet they generate.
    """
    require_locally_geometric(P)
    g = P.ground
    key = ("geo", P.bottom, P.mask)
    if key in g.memo:
        return g.memo[key]
    res = True
    for x in P.elements:
        rx = P.rank(x)
        bad = 0
        for a in P.atoms:
            if P.leq(a, x) or not join_mask(P, [a, x]):
                bad |= 1 << a
        if any(P.rank(y) > rx for y in bits(closure_mask(P, bad))):
            res = False
            break
    g.memo[key] = res
    return res


def is_geometric_poset_bruteforce(P: Poset) -> bool:
    """Literal reading of the definition, enumerating atom subsets (small posets only)."""
    require_locally_geometric(P)
    atoms = P.atoms
    for y in P.elements:
        ry = P.rank(y)
        for I in combinations(atoms, ry):
            if not ry or y not in set(bits(join_mask(P, I))):
                continue
            for x in P.elements:
                if P.rank(x) >= ry:
                    continue
                if not any(not P.leq(a, x) and join_mask(P, [a, x]) for a in I):
                    return False
    return True


def is_pure(P: Poset) -> bool:
    r = P.rk
    return all(P.rank(x) == r for x in P.maximal)


# ---------------------------------------------------------------- modular elements

def is_modular(L: Poset, x: int) -> bool:
    """Modular law x ∧ (y ∨ z) = (x ∧ y) ∨ z for all z <= x and all y."""
    if not is_lattice(L):
        raise NotALattice("not a lattice")
    g = L.ground
    for z in bits(g.down[x] & L.mask):
        for y in L.elements:
            lhs = lattice_meet(L, x, lattice_join(L, y, z))
            rhs = lattice_join(L, lattice_meet(L, x, y), z)
            if lhs != rhs:
                return False
    return True


def is_modular_by_rank(L: Poset, x: int) -> bool:
    """Rank criterion r(x)+r(y) = r(x∧y)+r(x∨y) for all y.

    Equivalent to the modular law in geometric lattices; used inside the
    ideal search, where it is much cheaper.
    """
    rx = L.rank(x)
    for y in L.elements:
        if rx + L.rank(y) != L.rank(lattice_meet(L, x, y)) + L.rank(lattice_join(L, x, y)):
            return False
    return True


# ---------------------------------------------------------------- ideals

@dataclass
class IdealWitness:
    atom_set: tuple[int, ...]
    elements: tuple[int, ...]
    kind: str
    modular_partners: dict[int, int] = field(default_factory=dict)
    rank: int = 0
    mask: int = 0
    bottom: int = 0

    def view(self, P: Poset) -> Poset:
        return Poset.view(P.ground, self.mask, self.bottom, P.simple)


@dataclass
class ChainWitness:
    ideals: list[IdealWitness]
    d: list[int]
    kind: str

    @property
    def exponents(self) -> list[int]:
        return list(self.d)


def _as_mask(P: Poset, Q) -> int:
    if isinstance(Q, Poset):
        return Q.mask
    if isinstance(Q, int):
        return Q
    m = 0
    for q in Q:
        m |= 1 << q
    return m


def _ideal_structure(P: Poset, qmask: int) -> Optional[tuple[int, int]]:
    """Return (atom mask, rank) if qmask is a pure join-closed proper order ideal."""
    g = P.ground
    if not qmask >> P.bottom & 1 or qmask & ~P.mask or qmask == P.mask:
        return None
    for q in bits(qmask):
        if g.down[q] & P.mask & ~qmask:
            return None
    amask = P.atom_mask & qmask
    if g.locally_geometric and P.simple:
        if closure_mask(P, amask) != qmask:
            return None
    else:
        qs = list(bits(qmask))
        for i, u in enumerate(qs):
            for v in qs[i + 1:]:
                if join_mask(P, [u, v]) & ~qmask:
                    return None
    ranks = {P.rank(x) for x in bits(maximal_of(g, qmask))}
    if len(ranks) != 1:
        return None
    return amask, ranks.pop()


def _modular_in(P: Poset, x: int, y: int, fast: bool) -> bool:
    L = lower_interval(P, x)
    return is_modular_by_rank(L, y) if fast else is_modular(L, y)


def _check_ideal(P: Poset, qmask: int, tm: bool, fast: bool = False) -> Optional[IdealWitness]:
    st = _ideal_structure(P, qmask)
    if st is None:
        return None
    amask, rq = st
    if rq != P.rk - 1:
        return None
    g = P.ground
    outside = P.atom_mask & ~amask
    for y in bits(qmask):
        for a in bits(outside):
            j = join_mask(P, [a, y])
            if not j or (tm and j & (j - 1)):
                return None
    partners = {}
    qmax = maximal_of(g, qmask)
    for x in P.maximal:
        cands = [y for y in bits(qmax & g.down[x]) if _modular_in(P, x, y, fast)]
        if not cands:
            return None
        partners[x] = cands[0]
    return IdealWitness(tuple(bits(amask)), tuple(bits(qmask)), "TM" if tm else "M",
                        partners, rq, qmask, P.bottom)


def gpmi_criterion(P: Poset, Q) -> bool:
    """Rank r-1 test on geometric posets: for distinct atoms a1, a2 outside Q,
    every element of a1 ∨ a2 lies above an atom of Q."""
    qmask = _as_mask(P, Q)
    st = _ideal_structure(P, qmask)
    if st is None or st[1] != P.rk - 1:
        return False
    amask = st[0]
    g = P.ground
    outside = list(bits(P.atom_mask & ~amask))
    for a1, a2 in combinations(outside, 2):
        for x in bits(join_mask(P, [a1, a2])):
            if not g.down[x] & amask:
                return False
    return True


def check_M_ideal(P: Poset, Q, method: str = "definition") -> Optional[IdealWitness]:
    """IdealWitness if Q is an M-ideal of rank rk(P)-1, else None.

    method "gpmi" answers through the geometric-poset criterion (P must be
    a geometric poset); the witness still records modular partners.
    """
    qmask = _as_mask(P, Q)
    if method == "gpmi":
        if not is_geometric_poset(P) or not gpmi_criterion(P, qmask):
            return None
        return _check_ideal(P, qmask, tm=False, fast=True)
    return _check_ideal(P, qmask, tm=False)


def check_TM_ideal(P: Poset, Q) -> Optional[IdealWitness]:
    return _check_ideal(P, _as_mask(P, Q), tm=True)


def ideal_candidates(P: Poset, tm: bool):
    """Yield every M- (or TM-) ideal of rank rk(P)-1, deterministically.

    Starting from an atom set B, forced additions are applied until stable:
    atoms below elements of the closure (order ideal) and atoms violating
    join existence (uniqueness for TM) with some element of the closure.
    Then the first maximal element x with no rank r-1 element of the
    closure below it branches over the modular coatoms of P_{<=x}.
    """
    g = P.ground
    r = P.rk
    if r == 0 or not is_pure(P):
        return
    atoms = P.atoms
    maxP = P.maximal
    seen_states: set[int] = set()
    yielded: set[int] = set()

    def propagate(B: int):
        while True:
            Q = closure_mask(P, B)
            if any(P.rank(q) >= r for q in bits(Q)):
                return None
            need = 0
            for q in bits(Q):
                need |= g.down[q]
            need &= P.atom_mask
            if need & ~B:
                B |= need
                continue
            add = 0
            for a in atoms:
                if B >> a & 1:
                    continue
                for y in bits(Q):
                    j = join_mask(P, [a, y])
                    if not j or (tm and j & (j - 1)):
                        add |= 1 << a
                        break
            if add:
                B |= add
                continue
            return B, Q

    def rec(B: int):
        if B in seen_states:
            return
        seen_states.add(B)
        res = propagate(B)
        if res is None:
            return
        B, Q = res
        top = 0
        for q in bits(Q):
            if P.rank(q) == r - 1:
                top |= 1 << q
        open_x = None
        for x in maxP:
            if not g.down[x] & top:
                open_x = x
                break
        if open_x is None:
            if Q not in yielded:
                w = _check_ideal(P, Q, tm, fast=bool(g.locally_geometric))
                if w is not None:
                    yielded.add(Q)
                    yield w
            return
        x = open_x
        bx = B & g.down[x]
        for y in P.covers_down(x):
            ay = g.down[y] & P.atom_mask
            if bx & ~ay:
                continue
            if not _modular_in(P, x, y, fast=bool(g.locally_geometric)):
                continue
            yield from rec(B | ay)

    yield from rec(0)


def _chain(P: Poset, tm: bool, failed: set) -> Optional[list[IdealWitness]]:
    if P.rk == 0:
        return []
    key = (P.bottom, P.mask)
    if key in failed:
        return None
    for w in ideal_candidates(P, tm):
        Q = w.view(P)
        sub = _chain(Q, tm, failed)
        if sub is not None:
            return sub + [w]
    failed.add(key)
    return None


def _supersolvable(P: Poset, tm: bool) -> Optional[ChainWitness]:
    require_locally_geometric(P)
    g = P.ground
    key = ("sss" if tm else "ss", P.bottom, P.mask)
    if key in g.memo:
        return g.memo[key]
    failed = g.memo.setdefault(("chain-failed", tm), set())
    ideals = _chain(P, tm, failed)
    res = None
    if ideals is not None:
        bottom = IdealWitness((), (P.bottom,), "TM" if tm else "M", {}, 0,
                              1 << P.bottom, P.bottom)
        chain = ideals if P.rk > 0 else [bottom]
        sizes = [len(w.atom_set) for w in chain] + [len(P.atoms)] if P.rk > 0 else [0]
        d = [sizes[i + 1] - sizes[i] for i in range(len(sizes) - 1)]
        res = ChainWitness(chain, d, "TM" if tm else "M")
    g.memo[key] = res
    return res


def is_supersolvable(P: Poset) -> Optional[ChainWitness]:
    return _supersolvable(P, tm=False)


def is_strictly_supersolvable(P: Poset) -> Optional[ChainWitness]:
    return _supersolvable(P, tm=True)


def verify_chain(P: Poset, chain: ChainWitness) -> bool:
    """Re-check every step of an M- or TM-chain from scratch."""
    tm = chain.kind == "TM"
    if P.rk == 0:
        return not chain.d
    levels = [w.view(P) for w in chain.ideals] + [P]
    if len(levels) != P.rk + 1:
        return False
    for i in range(P.rk):
        w = _check_ideal(levels[i + 1], levels[i].mask, tm)
        if w is None or w.rank != i:
            return False
    return sum(chain.d) == len(P.atoms)


def chain_from_masks(P: Poset, masks: Sequence[int], tm: bool = True) -> Optional[ChainWitness]:
    """Check a proposed chain of ideals given by element masks of ranks 0..rk-1."""
    if P.rk == 0:
        return ChainWitness([IdealWitness((), (P.bottom,), "TM" if tm else "M", {}, 0,
                                          1 << P.bottom, P.bottom)], [], "TM" if tm else "M")
    if len(masks) != P.rk:
        return None
    levels = [Poset.view(P.ground, m, P.bottom, P.simple) for m in masks] + [P]
    ideals = []
    for i in range(P.rk):
        w = _check_ideal(levels[i + 1], levels[i].mask, tm)
        if w is None or w.rank != i:
            return None
        ideals.append(w)
    sizes = [len(w.atom_set) for w in ideals] + [len(P.atoms)]
    return ChainWitness(ideals, [sizes[i + 1] - sizes[i] for i in range(P.rk)], "TM" if tm else "M")
