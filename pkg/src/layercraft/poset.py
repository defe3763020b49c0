"""Finite ranked posets with a unique minimum.

A validated poset is stored once as a ``Ground``: elements indexed
0..n-1 in a linear extension sorted by rank, with cover lists and
inclusive up/down sets encoded as Python int bitmasks.  A ``Poset`` is an
immutable view (bottom element plus element mask) over a ground, so that
upper sets and generated subposets share storage and memo tables with
the ambient poset they came from.
"""

from __future__ import annotations

import sys
from collections import Counter
from dataclasses import dataclass
from typing import Hashable, Iterable, Iterator, Optional, Sequence

from .errors import AtomNotFound, CycleDetected, MultipleMinima, NotMonic, NotRanked


def bits(m: int) -> Iterator[int]:
    """Indices of set bits, ascending."""
    while m:
        low = m & -m
        yield low.bit_length() - 1
        m ^= low


def bits_desc(m: int) -> Iterator[int]:
    while m:
        i = m.bit_length() - 1
        yield i
        m ^= 1 << i


# ---------------------------------------------------------------- polynomials

@dataclass(frozen=True)
class PolyZ:
    """Integer polynomial in t, coefficients stored constant term first."""
    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int] = ()):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(int(x) for x in c))

    @classmethod
    def t_power(cls, k: int) -> "PolyZ":
        return cls([0] * k + [1])

    @classmethod
    def from_roots(cls, roots: Iterable[int]) -> "PolyZ":
        p = cls([1])
        for d in roots:
            p = p * cls([-d, 1])
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __add__(self, other: "PolyZ") -> "PolyZ":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return PolyZ(x + y for x, y in zip(a, b))

    def __neg__(self) -> "PolyZ":
        return PolyZ(-x for x in self.coeffs)

    def __sub__(self, other: "PolyZ") -> "PolyZ":
        return self + (-other)

    def __mul__(self, other: "PolyZ") -> "PolyZ":
        if not self.coeffs or not other.coeffs:
            return PolyZ()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return PolyZ(out)

    def shift(self, k: int) -> "PolyZ":
        """Multiply by t^k."""
        return PolyZ((0,) * k + self.coeffs) if self.coeffs else self

    def __call__(self, t: int) -> int:
        v = 0
        for c in reversed(self.coeffs):
            v = v * t + c
        return v

    def divmod(self, divisor: "PolyZ") -> tuple["PolyZ", "PolyZ"]:
        """Exact division by a monic polynomial in Z[t]."""
        if not divisor.is_monic():
            raise NotMonic(f"divisor {divisor} is not monic")
        r = list(self.coeffs)
        dd = divisor.degree
        if len(r) - 1 < dd:
            return PolyZ(), self
        q = [0] * (len(r) - dd)
        for k in range(len(r) - 1, dd - 1, -1):
            c = r[k]
            if c:
                q[k - dd] = c
                for j, b in enumerate(divisor.coeffs):
                    r[k - dd + j] -= c * b
        return PolyZ(q), PolyZ(r)

    def divides(self, other: "PolyZ") -> bool:
        """True iff self | other in Z[t] (self monic)."""
        return other.divmod(self)[1].is_zero()

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mag = abs(c)
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            body = str(mag) if (mag != 1 or k == 0) else ""
            term = body + mono
            if not terms:
                terms.append(("-" if c < 0 else "") + term)
            else:
                terms.append((" - " if c < 0 else " + ") + term)
        return "".join(terms)


# ---------------------------------------------------------------- storage

class Ground:
    """Shared storage for a validated poset and all views taken from it."""

    def __init__(self, ids: Sequence[Hashable], labels: Sequence[str],
                 rank: Sequence[int], covers: Iterable[tuple[int, int]]):
        n = len(ids)
        self.ids = list(ids)
        self.labels = list(labels)
        self.rank = list(rank)
        self.index = {x: i for i, x in enumerate(self.ids)}
        self.up_covers: list[list[int]] = [[] for _ in range(n)]
        self.down_covers: list[list[int]] = [[] for _ in range(n)]
        for lo, hi in covers:
            if not rank[hi] == rank[lo] + 1:
                raise ValueError("cover must raise rank by one")
            self.up_covers[lo].append(hi)
            self.down_covers[hi].append(lo)
        for lst in self.up_covers:
            lst.sort()
        for lst in self.down_covers:
            lst.sort()
        self.down = [0] * n
        for i in range(n):
            m = 1 << i
            for j in self.down_covers[i]:
                m |= self.down[j]
            self.down[i] = m
        self.up = [0] * n
        for i in range(n - 1, -1, -1):
            m = 1 << i
            for j in self.up_covers[i]:
                m |= self.up[j]
            self.up[i] = m
        self.full_mask = (1 << n) - 1
        # True once local geometricity is established (by check or by theorem);
        # enables the fast closure and cover computations for generated subposets.
        self.locally_geometric: Optional[bool] = None
        self.views: dict[tuple[int, int], "Poset"] = {}
        self.memo: dict = {}

    def __len__(self) -> int:
        return len(self.ids)


class Poset:
    """Immutable view of a ground poset: elements ``mask``, minimum ``bottom``.

    Elements are referred to by ground indices.  ``simple`` means the
    covers of the view are exactly the ground covers between its elements
    (true for the full poset, its upper sets, and every generated subposet
    of a locally geometric poset).
    """

    def __init__(self, ground: Ground, mask: int, bottom: int, simple: bool):
        self.ground = ground
        self.mask = mask
        self.bottom = bottom
        self.simple = simple
        self._elements: Optional[list[int]] = None
        self._rank: Optional[dict[int, int]] = None
        self._up: Optional[dict[int, list[int]]] = None
        self._down: Optional[dict[int, list[int]]] = None
        self._mu: Optional[dict[int, int]] = None
        self._chi: Optional[PolyZ] = None

    # -- construction helpers
    @classmethod
    def whole(cls, ground: Ground) -> "Poset":
        key = (0, ground.full_mask)
        P = ground.views.get(key)
        if P is None:
            P = cls(ground, ground.full_mask, 0, True)
            ground.views[key] = P
        return P

    @classmethod
    def view(cls, ground: Ground, mask: int, bottom: int, simple: bool) -> "Poset":
        key = (bottom, mask)
        P = ground.views.get(key)
        if P is None:
            P = cls(ground, mask, bottom, simple)
            P._check_ranked()
            ground.views[key] = P
        return P

    # -- basic structure
    @property
    def elements(self) -> list[int]:
        if self._elements is None:
            self._elements = list(bits(self.mask))
        return self._elements

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x: int) -> bool:
        return x >= 0 and bool(self.mask >> x & 1)

    def __iter__(self):
        return iter(self.elements)

    def __repr__(self) -> str:
        return f"<Poset {len(self)} elements, rank {self.rk}>"

    def label(self, x: int) -> str:
        return self.ground.labels[x]

    def id(self, x: int) -> Hashable:
        return self.ground.ids[x]

    def element(self, ident: Hashable) -> int:
        i = self.ground.index[ident]
        if i not in self:
            raise KeyError(ident)
        return i

    def leq(self, x: int, y: int) -> bool:
        return bool(self.ground.down[y] >> x & 1)

    def down_mask(self, x: int) -> int:
        return self.ground.down[x] & self.mask

    def up_mask(self, x: int) -> int:
        return self.ground.up[x] & self.mask

    def _compute_covers(self) -> None:
        g = self.ground
        up: dict[int, list[int]] = {x: [] for x in self.elements}
        down: dict[int, list[int]] = {x: [] for x in self.elements}
        if self.simple:
            for x in self.elements:
                up[x] = [y for y in g.up_covers[x] if self.mask >> y & 1]
                down[x] = [y for y in g.down_covers[x] if self.mask >> y & 1]
        else:
            for y in self.elements:
                below = g.down[y] & self.mask & ~(1 << y)
                kept = 0
                for z in bits_desc(below):
                    if not g.up[z] & kept:
                        kept |= 1 << z
                lst = list(bits(kept))
                down[y] = lst
                for z in lst:
                    up[z].append(y)
        self._up, self._down = up, down

    def covers_up(self, x: int) -> list[int]:
        if self._up is None:
            self._compute_covers()
        return self._up[x]

    def covers_down(self, x: int) -> list[int]:
        if self._down is None:
            self._compute_covers()
        return self._down[x]

    def cover_pairs(self) -> list[tuple[int, int]]:
        return [(x, y) for x in self.elements for y in self.covers_up(x)]

    def _check_ranked(self) -> None:
        if self.simple:
            return
        lo: dict[int, int] = {}
        hi: dict[int, int] = {}
        for y in self.elements:
            ds = self.covers_down(y)
            if not ds:
                lo[y] = hi[y] = 0
                continue
            lo[y] = min(lo[z] for z in ds) + 1
            hi[y] = max(hi[z] for z in ds) + 1
            if lo[y] != hi[y]:
                raise NotRanked(self.id(y))
        self._rank = lo

    def rank(self, x: int) -> int:
        if self.simple:
            return self.ground.rank[x] - self.ground.rank[self.bottom]
        if self._rank is None:
            self._check_ranked()
        return self._rank[x]

    @property
    def rk(self) -> int:
        return max(self.rank(x) for x in self.elements)

    def rank_mask(self, k: int) -> int:
        m = 0
        for x in self.elements:
            if self.rank(x) == k:
                m |= 1 << x
        return m

    @property
    def atoms(self) -> list[int]:
        return self.covers_up(self.bottom)

    @property
    def atom_mask(self) -> int:
        m = 0
        for a in self.atoms:
            m |= 1 << a
        return m

    @property
    def maximal(self) -> list[int]:
        return [x for x in self.elements if not self.covers_up(x)]

    def rank_counts(self) -> list[int]:
        c = Counter(self.rank(x) for x in self.elements)
        return [c[k] for k in range(self.rk + 1)]

    def atoms_below(self, x: int) -> int:
        """Mask of atoms of this view lying below x."""
        return self.ground.down[x] & self.atom_mask

    def is_full(self) -> bool:
        return self.bottom == 0 and self.mask == self.ground.full_mask


# ---------------------------------------------------------------- validation

def validate(elements: Sequence[Hashable], covers: Iterable[tuple[Hashable, Hashable]],
             labels: Optional[dict] = None) -> Poset:
    """Build a Poset from cover data, applying transitive reduction.

    Raises CycleDetected, MultipleMinima or NotRanked.
    """
    ids = list(elements)
    if not ids:
        raise MultipleMinima([])
    pos = {x: i for i, x in enumerate(ids)}
    if len(pos) != len(ids):
        raise ValueError("duplicate element ids")
    n = len(ids)
    succ: list[set[int]] = [set() for _ in range(n)]
    for lo, hi in covers:
        if lo not in pos or hi not in pos:
            raise KeyError(f"cover ({lo!r}, {hi!r}) mentions an unknown element")
        if lo == hi:
            raise CycleDetected(lo)
        succ[pos[lo]].add(pos[hi])
    indeg = [0] * n
    for s in succ:
        for j in s:
            indeg[j] += 1
    minima = [i for i in range(n) if indeg[i] == 0]
    order: list[int] = []
    queue = list(minima)
    deg = indeg[:]
    while queue:
        i = queue.pop(0)
        order.append(i)
        for j in sorted(succ[i]):
            deg[j] -= 1
            if deg[j] == 0:
                queue.append(j)
    if len(order) < n:
        stuck = next(i for i in range(n) if deg[i] > 0)
        raise CycleDetected(ids[stuck])
    if len(minima) != 1:
        raise MultipleMinima([ids[i] for i in minima])
    # transitive reduction via strict reachability sets
    reach = [0] * n
    for i in reversed(order):
        m = 0
        for j in succ[i]:
            m |= (1 << j) | reach[j]
        reach[i] = m
    red: list[list[int]] = [[] for _ in range(n)]
    for i in range(n):
        for j in succ[i]:
            if not any(reach[k] >> j & 1 for k in succ[i] if k != j):
                red[i].append(j)
    # ranks: shortest and longest paths from the minimum must agree
    lo = [0] * n
    hi = [0] * n
    seen = [False] * n
    seen[minima[0]] = True
    for i in order:
        for j in red[i]:
            if not seen[j]:
                lo[j], hi[j], seen[j] = lo[i] + 1, hi[i] + 1, True
            else:
                lo[j] = min(lo[j], lo[i] + 1)
                hi[j] = max(hi[j], hi[i] + 1)
    for i in order:
        if lo[i] != hi[i]:
            raise NotRanked(ids[i])
    perm = sorted(range(n), key=lambda i: (lo[i], i))
    new = {old: k for k, old in enumerate(perm)}
    labels = labels or {}
    ground = Ground([ids[i] for i in perm],
                    [str(labels.get(ids[i], ids[i])) for i in perm],
                    [lo[i] for i in perm],
                    [(new[i], new[j]) for i in range(n) for j in red[i]])
    return Poset.whole(ground)


def from_ground(ground: Ground) -> Poset:
    return Poset.whole(ground)


# ---------------------------------------------------------------- Möbius and χ

def mobius_from(P: Poset, x: Optional[int] = None) -> dict[int, int]:
    """μ(x, y) for all y >= x in P (x defaults to the minimum)."""
    if x is None or x == P.bottom:
        if P._mu is not None:
            return P._mu
        x0 = P.bottom
    else:
        x0 = x
    g = P.ground
    mask = P.mask & g.up[x0]
    mu = {x0: 1}
    for y in bits(mask & ~(1 << x0)):
        s = 0
        for c in bits(g.down[y] & mask & ~(1 << y)):
            s += mu[c]
        mu[y] = -s
    if x0 == P.bottom:
        P._mu = mu
    return mu


def mobius(P: Poset) -> dict[tuple[int, int], int]:
    """μ(x, y) for every comparable pair x <= y; pairs not listed have μ = 0."""
    out = {}
    for x in P.elements:
        for y, v in mobius_from(P, x).items():
            out[(x, y)] = v
    return out


def char_poly(P: Poset) -> PolyZ:
    if P._chi is None:
        mu = mobius_from(P)
        r = P.rk
        c = [0] * (r + 1)
        for y, v in mu.items():
            c[r - P.rank(y)] += v
        P._chi = PolyZ(c)
    return P._chi


# ---------------------------------------------------------------- joins and subposets

def minimal_of(g: Ground, m: int) -> int:
    kept = 0
    for i in bits(m):
        if not g.down[i] & kept:
            kept |= 1 << i
    return kept


def maximal_of(g: Ground, m: int) -> int:
    kept = 0
    for i in bits_desc(m):
        if not g.up[i] & kept:
            kept |= 1 << i
    return kept


def join_mask(P: Poset, T: Iterable[int]) -> int:
    g = P.ground
    m = P.mask
    for t in T:
        m &= g.up[t]
    return minimal_of(g, m)


def joins(P: Poset, T: Iterable[int]) -> set[int]:
    """Minimal common upper bounds of T in P (possibly none, possibly several)."""
    return set(bits(join_mask(P, T)))


def meets(P: Poset, T: Iterable[int]) -> set[int]:
    g = P.ground
    m = P.mask
    for t in T:
        m &= g.down[t]
    return set(bits(maximal_of(g, m)))


def _closure_general(P: Poset, bmask: int) -> int:
    # z belongs to P(B) iff z is a minimal upper bound of the atoms of B below it
    g = P.ground
    out = 1 << P.bottom
    for z in bits(P.mask & ~(1 << P.bottom)):
        below = g.down[z] & bmask
        if not below:
            continue
        ub = P.mask & g.down[z]
        for b in bits(below):
            ub &= g.up[b]
        if ub == 1 << z:
            out |= 1 << z
    return out


def _closure_geometric(P: Poset, bmask: int) -> int:
    # bottom-up: y is in P(B) iff it covers some z in P(B) and an atom of B
    # lies below y but not below z
    g = P.ground
    out = 1 << P.bottom
    level = [P.bottom]
    while level:
        nxt = []
        for z in level:
            dz = g.down[z]
            for y in g.up_covers[z]:
                if out >> y & 1 or not P.mask >> y & 1:
                    continue
                if g.down[y] & bmask & ~dz:
                    out |= 1 << y
                    nxt.append(y)
        level = nxt
    return out


def closure_mask(P: Poset, bmask: int) -> int:
    if P.ground.locally_geometric and P.simple:
        return _closure_geometric(P, bmask)
    return _closure_general(P, bmask)


def generated_subposet(P: Poset, B: Iterable[int]) -> Poset:
    """The subposet P(B): the minimum together with all joins of subsets of B."""
    bmask = 0
    amask = P.atom_mask
    for b in B:
        if not amask >> b & 1:
            raise AtomNotFound(P.id(b) if 0 <= b < len(P.ground) else b)
        bmask |= 1 << b
    return generated_by_mask(P, bmask)


def generated_by_mask(P: Poset, bmask: int) -> Poset:
    if bmask == P.atom_mask:
        return P
    mask = closure_mask(P, bmask)
    simple = bool(P.ground.locally_geometric) and P.simple
    return Poset.view(P.ground, mask, P.bottom, simple)


def upper_set(P: Poset, x: int) -> Poset:
    if x not in P:
        raise KeyError(x)
    if x == P.bottom:
        return P
    return Poset.view(P.ground, P.mask & P.ground.up[x], x, P.simple)


def lower_interval(P: Poset, x: int) -> Poset:
    """P_{<=x} as a view (the order ideal generated by x)."""
    return Poset.view(P.ground, P.mask & P.ground.down[x], P.bottom, P.simple)


def separator_epsilon(P: Poset, a: int) -> int:
    if a not in P.atoms:
        raise AtomNotFound(P.id(a))
    rest = generated_by_mask(P, P.atom_mask & ~(1 << a))
    return P.rk - rest.rk


def same_elements(P: Poset, Q: Poset) -> bool:
    return P.ground is Q.ground and P.mask == Q.mask and P.bottom == Q.bottom


# ---------------------------------------------------------------- isomorphism

def _refine_pair(P: Poset, Q: Poset) -> Optional[tuple[dict, dict]]:
    # joint colour refinement so that colour names are comparable across P and Q
    def init(R):
        return {x: (R.rank(x), len(R.covers_up(x)), len(R.covers_down(x))) for x in R.elements}
    cp, cq = init(P), init(Q)
    while True:
        if Counter(cp.values()) != Counter(cq.values()):
            return None
        names = {c: i for i, c in enumerate(sorted(set(cp.values()) | set(cq.values()), key=repr))}

        def step(R, c):
            return {x: (names[c[x]],
                        tuple(sorted(names[c[y]] for y in R.covers_up(x))),
                        tuple(sorted(names[c[y]] for y in R.covers_down(x))))
                    for x in R.elements}
        np_, nq = step(P, cp), step(Q, cq)
        if len(set(np_.values()) | set(nq.values())) == len(names):
            if Counter(np_.values()) != Counter(nq.values()):
                return None
            return np_, nq
        cp, cq = np_, nq


def is_isomorphic(P: Poset, Q: Poset) -> Optional[dict[int, int]]:
    """An order isomorphism P -> Q as a dict, or None."""
    if len(P) != len(Q) or P.rank_counts() != Q.rank_counts():
        return None
    if char_poly(P) != char_poly(Q):
        return None
    ref = _refine_pair(P, Q)
    if ref is None:
        return None
    cp, cq = ref
    by_colour: dict[Hashable, list[int]] = {}
    for y in Q.elements:
        by_colour.setdefault(cq[y], []).append(y)
    classes = Counter(cp.values())
    order = sorted(P.elements, key=lambda x: (P.rank(x), classes[cp[x]], x))
    fwd: dict[int, int] = {}
    inv: dict[int, int] = {}

    def consistent(x, y):
        for nb in P.covers_down(x):
            if nb in fwd and fwd[nb] not in Q.covers_down(y):
                return False
        for nb in P.covers_up(x):
            if nb in fwd and fwd[nb] not in Q.covers_up(y):
                return False
        for nb in Q.covers_down(y):
            if nb in inv and inv[nb] not in P.covers_down(x):
                return False
        for nb in Q.covers_up(y):
            if nb in inv and inv[nb] not in P.covers_up(x):
                return False
        return True

    def search(k):
        if k == len(order):
            return True
        x = order[k]
        for y in by_colour.get(cp[x], []):
            if y in inv or not consistent(x, y):
                continue
            fwd[x] = y
            inv[y] = x
            if search(k + 1):
                return True
            del fwd[x]
            del inv[y]
        return False

    if len(order) + 100 > sys.getrecursionlimit():
        sys.setrecursionlimit(len(order) + 1000)
    return dict(fwd) if search(0) else None
