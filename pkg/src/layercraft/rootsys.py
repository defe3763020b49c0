"""Positive root systems of types A, B, C, their ideals, and exponent formulas.

Roots are keyed by their coordinates in the orthonormal basis ε.  Type A of
rank r is the ideal of B_{r+1} below ε₁−ε_{r+1}, so it lives in r+1
ε-coordinates and r simple coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence, Union

from .errors import (InvalidExtensionParameter, NotAPositiveRoot, NotCovered, ParseError,
                     UnsupportedType)
from .intlat import mat_mul

TYPES = ("A", "B", "C")


def _check_type(kind: str) -> str:
    k = str(kind).upper()
    if k not in TYPES:
        raise UnsupportedType(f"root systems of type {kind!r} are not supported")
    return k


def eps_dim(kind: str, l: int) -> int:
    return l + 1 if _check_type(kind) == "A" else l


def simple_roots_matrix(kind: str, l: int) -> list[list[int]]:
    """P with the simple roots as columns, in ε-coordinates (T = P·S)."""
    kind = _check_type(kind)
    dim = eps_dim(kind, l)
    P = [[0] * l for _ in range(dim)]
    for k in range(l):
        P[k][k] = 1
        if k + 1 < dim:
            P[k + 1][k] = -1
    if kind == "B":
        P[l - 1][l - 1] = 1
    elif kind == "C":
        P[l - 1][l - 1] = 2
    return P


def to_simple(kind: str, l: int, eps: Sequence[int]) -> Optional[tuple[int, ...]]:
    """Simple-root coordinates of an ε-vector, or None if it is not in the root lattice span."""
    kind = _check_type(kind)
    s = []
    acc = 0
    for k in range(l):
        acc += eps[k]
        s.append(acc)
    if kind == "A":
        if acc + eps[l] != 0:
            return None
    elif kind == "C":
        # the last simple root is 2ε_ℓ
        if s[-1] % 2:
            return None
        s[-1] //= 2
    return tuple(s)


@dataclass(frozen=True)
class Root:
    eps: tuple[int, ...]
    simple: tuple[int, ...]

    @property
    def height(self) -> int:
        return sum(self.simple)

    @property
    def label(self) -> str:
        return root_label(self.eps)


def root_label(eps: Sequence[int]) -> str:
    parts = []
    for i, c in enumerate(eps):
        if c == 0:
            continue
        if parts:
            parts.append("+" if c > 0 else "-")
        elif c < 0:
            parts.append("-")
        parts.append(("" if abs(c) == 1 else str(abs(c))) + f"e{i + 1}")
    return "".join(parts)


def _unit(dim: int, i: int, c: int = 1) -> list[int]:
    v = [0] * dim
    v[i] = c
    return v


def _sort_key(r: Root):
    return (r.height, tuple(-x for x in r.simple))


def positive_system(kind: str, l: int) -> list[Root]:
    kind = _check_type(kind)
    if l < 1:
        raise ValueError("rank must be at least 1")
    dim = eps_dim(kind, l)
    vecs = []
    for i in range(dim):
        for j in range(i + 1, dim):
            v = _unit(dim, i)
            v[j] = -1
            vecs.append(v)
            if kind != "A":
                w = _unit(dim, i)
                w[j] = 1
                vecs.append(w)
        if kind == "B":
            vecs.append(_unit(dim, i))
        elif kind == "C":
            vecs.append(_unit(dim, i, 2))
    roots = [Root(tuple(v), to_simple(kind, l, v)) for v in vecs]
    return sorted(roots, key=_sort_key)


def make_root(kind: str, l: int, eps: Sequence[int]) -> Root:
    s = to_simple(kind, l, eps)
    if s is None:
        raise NotAPositiveRoot(root_label(eps))
    return Root(tuple(eps), s)


def root_leq(b1: Root, b2: Root) -> bool:
    return all(y - x >= 0 for x, y in zip(b1.simple, b2.simple))


# ---------------------------------------------------------------- parsing

def parse_root_expr(s: str, kind: Optional[str] = None,
                    l: Optional[int] = None) -> Union[Root, tuple[tuple[int, int], ...]]:
    """Parse "e1-e5", "e2+e3", "2e3", "e4".

    With kind and l the result is checked against Φ⁺ and returned as a
    Root; without them the parsed (index, coefficient) terms are returned.
    """
    pos = 0
    n = len(s)

    def term():
        nonlocal pos
        coef = 1
        if pos < n and s[pos].isdigit():
            coef = int(s[pos])
            pos += 1
        if pos >= n or s[pos] != "e":
            raise ParseError("expected 'e'", pos)
        pos += 1
        start = pos
        while pos < n and s[pos].isdigit():
            pos += 1
        if start == pos:
            raise ParseError("expected index", pos)
        idx = int(s[start:pos])
        if idx < 1:
            raise ParseError("index must be at least 1", start)
        return idx, coef

    terms = [term()]
    if pos < n:
        if s[pos] not in "+-":
            raise ParseError(f"unexpected {s[pos]!r}", pos)
        sign = 1 if s[pos] == "+" else -1
        pos += 1
        i2, c2 = term()
        terms.append((i2, sign * c2))
    if pos != n:
        raise ParseError(f"unexpected {s[pos]!r}", pos)
    if kind is None:
        return tuple(terms)
    dim = eps_dim(kind, l)
    v = [0] * dim
    for idx, c in terms:
        if idx > dim:
            raise NotAPositiveRoot(f"{s}: index {idx} exceeds {dim}")
        v[idx - 1] += c
    r = tuple(v)
    if r not in {x.eps for x in positive_system(kind, l)}:
        raise NotAPositiveRoot(s)
    return make_root(kind, l, r)


# ---------------------------------------------------------------- ideals

@dataclass(frozen=True)
class RootIdeal:
    kind: str
    rank: int
    roots: tuple[tuple[int, ...], ...]
    generators: tuple[tuple[int, ...], ...] = ()
    p: Optional[int] = None
    base: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        if not self.base and self.p is None:
            object.__setattr__(self, "base", self.roots)

    def __len__(self) -> int:
        return len(self.roots)

    def __contains__(self, eps) -> bool:
        return tuple(eps) in set(self.base)

    @property
    def dim(self) -> int:
        return eps_dim(self.kind, self.rank)

    def root_objects(self) -> list[Root]:
        return [make_root(self.kind, self.rank, v) for v in self.roots]

    def labels(self) -> list[str]:
        return [root_label(v) for v in self.roots]


def _as_root(kind: str, l: int, g) -> Root:
    if isinstance(g, Root):
        return g
    if isinstance(g, str):
        return parse_root_expr(g, kind, l)
    eps = tuple(int(x) for x in g)
    if eps not in {x.eps for x in positive_system(kind, l)}:
        raise NotAPositiveRoot(root_label(eps) if any(eps) else str(eps))
    return make_root(kind, l, eps)


def ideal_closure(kind: str, l: int, generators: Iterable = ()) -> RootIdeal:
    kind = _check_type(kind)
    system = positive_system(kind, l)
    gens = [_as_root(kind, l, g) for g in generators]
    roots = tuple(r.eps for r in system if any(root_leq(r, g) for g in gens))
    return RootIdeal(kind, l, roots, tuple(g.eps for g in gens))


def full_ideal(kind: str, l: int) -> RootIdeal:
    system = positive_system(kind, l)
    return RootIdeal(_check_type(kind), l, tuple(r.eps for r in system),
                     tuple(r.eps for r in system))


def is_ideal(kind: str, l: int, subset: Iterable) -> bool:
    system = positive_system(kind, l)
    sub = {(_as_root(kind, l, x)).eps for x in subset}
    for r in system:
        if r.eps in sub:
            continue
        if any(root_leq(r, make_root(kind, l, x)) for x in sub):
            return False
    return True


def antichains(kind: str, l: int) -> Iterator[tuple[Root, ...]]:
    system = positive_system(kind, l)

    def rec(start: int, chosen: list[Root]):
        yield tuple(chosen)
        for i in range(start, len(system)):
            r = system[i]
            if all(not root_leq(r, c) and not root_leq(c, r) for c in chosen):
                chosen.append(r)
                yield from rec(i + 1, chosen)
                chosen.pop()

    yield from rec(0, [])


def all_ideals(kind: str, l: int) -> list[RootIdeal]:
    """Every ideal of Φ⁺, one per antichain of generators."""
    return [ideal_closure(kind, l, ac) for ac in antichains(kind, l)]


# ---------------------------------------------------------------- statistics

@dataclass
class IdealStats:
    heights: tuple[int, ...]
    dp: tuple[int, ...]
    E_plus: dict[int, tuple[tuple[int, ...], ...]]
    E_minus: dict[int, tuple[tuple[int, ...], ...]]
    b_plus: dict[int, int]
    b_minus: dict[int, int]
    b: dict[int, int]
    diagonal: tuple[int, ...]
    n: int
    s: Optional[int] = None
    a: Optional[int] = None
    a_literal: Optional[int] = None
    t: Optional[int] = None
    m: dict[int, int] = field(default_factory=dict)
    p: Optional[int] = None
    notes: list[str] = field(default_factory=list)


def _edge(v: Sequence[int]) -> Optional[tuple[int, int, int]]:
    """(i, j, sign) for ε_i ± ε_j with i < j (1-based), else None."""
    nz = [k for k, c in enumerate(v) if c]
    if len(nz) != 2:
        return None
    i, j = nz
    return i + 1, j + 1, v[j]


def _diag_index(v: Sequence[int]) -> Optional[int]:
    nz = [k for k, c in enumerate(v) if c]
    return nz[0] + 1 if len(nz) == 1 else None


def stats(I: RootIdeal, p: Optional[int] = None) -> IdealStats:
    kind, l = I.kind, I.rank
    if p is None:
        p = I.p
    roots = [make_root(kind, l, v) for v in I.base]
    M = max((r.height for r in roots), default=0)
    heights = tuple(sum(1 for r in roots if r.height == k) for k in range(1, M + 1))
    tk = (l,) + heights + (0,)
    dp = []
    for k in range(M + 1):
        dp += [k] * (tk[k] - tk[k + 1])
    idx = range(1, eps_dim(kind, l) + 1)
    Ep = {i: [] for i in idx}
    Em = {i: [] for i in idx}
    diag = []
    for r in roots:
        e = _edge(r.eps)
        if e:
            (Ep if e[2] > 0 else Em)[e[0]].append(r.eps)
        else:
            diag.append(_diag_index(r.eps))
    Ep = {i: tuple(v) for i, v in Ep.items()}
    Em = {i: tuple(v) for i, v in Em.items()}
    bp = {i: len(Ep[i]) for i in idx}
    bm = {i: len(Em[i]) for i in idx}
    b = {i: bp[i] + bm[i] for i in idx}
    st = IdealStats(heights, tuple(sorted(dp)), Ep, Em, bp, bm, b, tuple(sorted(diag)), 0, p=p)
    diag_set = set(diag)
    if kind == "C":
        st.n = min((i for i in idx if b[i] or i in diag_set), default=l + 1)
        st.s = min(diag_set, default=l + 1)
        if p is not None:
            raise InvalidExtensionParameter("extensions are defined for type B only")
        return st
    if kind == "A":
        st.n = min((i for i in idx if b[i]), default=l + 1)
        if p is not None:
            raise InvalidExtensionParameter("extensions are defined for type B only")
        return st
    # type B
    st.n = min((i for i in idx if b[i] or i in diag_set), default=l + 1)
    for i in idx:
        if Ep[i]:
            st.m[i] = min(_edge(v)[1] for v in Ep[i])
    if diag_set:
        st.a = min(i for i in diag_set if i >= st.n)
        lit = [i for i in diag_set if i >= st.n and not Ep[i]]
        st.a_literal = min(lit) if lit else None
        if st.a_literal != st.a:
            st.notes.append(f"a taken as {st.a} (first index with ε_i in the ideal); "
                            f"the defining condition with E_i^+ empty gives {st.a_literal}")
        s_cands = [i for i in idx if i >= st.a and Ep[i]]
        st.s = min(s_cands) if s_cands else l
    else:
        st.s = None
    if p is not None:
        lo = st.s if st.s is not None else 1
        if not lo <= p <= l + 1:
            raise InvalidExtensionParameter(f"p={p} outside [{lo}, {l + 1}]")
    if diag_set:
        pp = l + 1 if p is None else p
        t_cands = [i for i in idx if i >= st.s and i in st.m and st.m[i] < pp]
        if t_cands:
            st.t = min(t_cands)
        elif pp == l + 1:
            # no positive edges from s on; the chain degenerates to the last index
            st.t = l
    return st


def extension(I: RootIdeal, p: int) -> RootIdeal:
    """Replace ε_i by 2ε_i for p <= i <= ℓ."""
    if I.kind != "B":
        raise InvalidExtensionParameter("extensions are defined for type B only")
    if I.p is not None:
        raise InvalidExtensionParameter("ideal is already extended")
    l = I.rank
    if not 1 <= p <= l + 1:
        raise InvalidExtensionParameter(f"p={p} outside [1, {l + 1}]")
    out = []
    for v in I.roots:
        i = _diag_index(v)
        out.append(tuple(2 * c for c in v) if i is not None and i >= p else v)
    return RootIdeal("B", l, tuple(out), I.generators, p, I.roots)


# ---------------------------------------------------------------- matrices and arrangements

def coefficient_matrices(kind: str, l: int, roots: Sequence) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """(S, T, P): simple and ε coordinates as columns, with T = P·S."""
    P = simple_roots_matrix(kind, l)
    cols = [r.eps if isinstance(r, Root) else tuple(r) for r in roots]
    simple = []
    for v in cols:
        s = to_simple(kind, l, v)
        if s is None:
            raise NotAPositiveRoot(root_label(v))
        simple.append(s)
    S = [[s[i] for s in simple] for i in range(l)]
    T = [[v[i] for v in cols] for i in range(eps_dim(kind, l))]
    if cols:
        assert mat_mul(P, S) == T
    return S, T, P


def build_arrangement_from_ideal(I: RootIdeal, lattice: str = "integer", group="torus",
                                 p: Optional[int] = None):
    from .arrangement import Arrangement
    if p is not None:
        I = extension(I, p)
    S, T, _ = coefficient_matrices(I.kind, I.rank, I.roots)
    if lattice == "integer":
        M, dim = T, I.dim
    elif lattice == "root":
        M, dim = S, I.rank
    else:
        raise ValueError(f"lattice must be 'root' or 'integer', not {lattice!r}")
    chars = [tuple(row[j] for row in M) for j in range(len(I.roots))]
    return Arrangement(group, dim, chars, I.labels())


# ---------------------------------------------------------------- predictions

def _b_range(st: IdealStats, lo: int, hi: int) -> list[int]:
    return [st.b[i] for i in range(lo, hi + 1)]


def predicted_exponents(I: RootIdeal, lattice: str = "integer", p: Optional[int] = None) -> tuple[int, ...]:
    """Exponent multiset predicted by the structure theorems, sorted.

    Raises NotCovered when no theorem applies.
    """
    if p is None:
        p = I.p
    kind, l = I.kind, I.rank
    st = stats(I, p)
    if lattice not in ("integer", "root"):
        raise ValueError(f"lattice must be 'root' or 'integer', not {lattice!r}")
    if kind == "A":
        dp = list(st.dp)
        return tuple(sorted(dp + [0] if lattice == "integer" else dp))
    if kind == "C":
        n, s = st.n, st.s
        zeros = [0] * (n - 1)
        if lattice == "integer" or s == l + 1:
            return tuple(sorted(zeros + _b_range(st, n, s - 1) + [2 * (l - i + 1) for i in range(s, l + 1)]))
        return tuple(sorted(zeros + _b_range(st, n, s - 1) + [2 * (l - i) for i in range(s, l)] + [l - s + 1]))
    # type B: the two lattices give isomorphic layer posets
    if st.a is None:
        # no ε_i in the ideal, so the extension is the identity and the type A count applies
        return tuple(sorted(_b_range(st, 1, l)))
    pp = l + 1 if p is None else p
    n, a, t = st.n, st.a, st.t
    if t is None:
        raise NotCovered(f"no i >= s={st.s} has m(i) < p={pp}")
    out = [0] * (n - 1) + [2 * l - pp - t + 2]
    for i in range(n, l):
        out.append(st.b[i] + 1 if a <= i <= t - 1 else st.b[i])
    return tuple(sorted(out))


def lemma_exponents(I: RootIdeal, p: Optional[int] = None) -> tuple[int, ...]:
    """{2ℓ−p+1} ∪ {b_1..b_{ℓ−1}} for a type-B ideal with ε₁+ε_m, m < p."""
    if p is None:
        p = I.p if I.p is not None else I.rank + 1
    if I.kind != "B":
        raise NotCovered("the single-parameter form is stated for type B")
    st = stats(I, p)
    if 1 not in st.m:
        raise NotCovered("E_1^+ is empty")
    if not st.m[1] < p:
        raise NotCovered(f"m={st.m[1]} is not below p={p}")
    return tuple(sorted([2 * I.rank - p + 1] + _b_range(st, 1, I.rank - 1)))


# ---------------------------------------------------------------- guided orders

def _min_index(v: Sequence[int]) -> int:
    return next(k for k, c in enumerate(v) if c) + 1


def _atoms_of(lp, I: RootIdeal, roots: Iterable) -> list[int]:
    pos = {v: k for k, v in enumerate(I.roots)}
    out = []
    for v in roots:
        out += lp.atoms_of_character(pos[v])
    return out


def _searched_order(lp, atoms: Sequence[int]) -> list[int]:
    """An atom order for the subposet generated by ``atoms``, found by exhaustive search."""
    from .classify import is_inductive
    from .poset import generated_by_mask
    mask = 0
    for a in atoms:
        mask |= 1 << a
    Q = generated_by_mask(lp.poset, mask)
    table = is_inductive(Q)
    if table is None:
        return sorted(atoms)
    return [row.atom for row in table.rows]


def _c_root_order(I: RootIdeal, lo: int) -> list[tuple[int, ...]]:
    """Full C on indices lo..ℓ: recursively the smaller system, then E_lo, then 2ε_lo."""
    l = I.rank
    roots = [v for v in I.roots if _min_index(v) >= lo]
    if lo == l:
        return roots
    inner = _c_root_order(I, lo + 1)
    edges = [v for v in roots if _min_index(v) == lo and _edge(v)]
    top = [v for v in roots if _min_index(v) == lo and not _edge(v)]
    return inner + edges + top


def _b_lemma_order(I: RootIdeal, lp, st: IdealStats, lo: int, p: int) -> list[int]:
    l = I.rank
    roots = [v for v in I.roots if _min_index(v) >= lo]
    m = st.m.get(lo)
    if l - lo + 1 <= 2 or m is None or not m < p:
        return _searched_order(lp, _atoms_of(lp, I, roots))
    inner = _b_lemma_order(I, lp, st, lo + 1, p)
    late = [v for v in roots if _min_index(v) == lo and _edge(v) and _edge(v)[2] > 0
            and m <= _edge(v)[1] <= p - 1]
    late.sort(key=lambda v: -_edge(v)[1])
    rest = [v for v in roots if _min_index(v) == lo and v not in late]
    return inner + _atoms_of(lp, I, rest) + _atoms_of(lp, I, late)


def guided_atom_order(I: RootIdeal, lattice: str, lp) -> list[int]:
    """Atom order for guided induction following the constructive proofs.

    Type C root lattice: the full C part on indices s..ℓ, then E_{s-1}, ..., E_n.
    Type B (either lattice): the single-parameter construction on indices t..ℓ,
    then the rows t-1, ..., n.  Type C integer lattice and type A follow
    the strictly supersolvable chain.  Parts not covered by a construction
    are ordered by exhaustive search.
    """
    kind, l = I.kind, I.rank
    st = stats(I, I.p)
    if kind == "C" and lattice == "root" and st.s <= l:
        order = _atoms_of(lp, I, _c_root_order(I, st.s))
        for i in range(st.s - 1, st.n - 1, -1):
            order += _atoms_of(lp, I, [v for v in I.roots if _min_index(v) == i])
        return order
    if kind == "B" and st.a is not None:
        pp = l + 1 if I.p is None else I.p
        order = _b_lemma_order(I, lp, st, st.t, pp)
        for i in range(st.t - 1, st.n - 1, -1):
            order += _atoms_of(lp, I, [v for v in I.roots if _min_index(v) == i])
        return order
    return [a for level in chain_character_sets(I) for a in _atoms_of(lp, I, level)]


def chain_character_sets(I: RootIdeal) -> list[list[tuple[int, ...]]]:
    """Roots grouped by smallest ε-index, from the last index up."""
    groups = {}
    for v in I.roots:
        groups.setdefault(_min_index(v), []).append(v)
    return [groups[i] for i in sorted(groups, reverse=True)]


def sss_chain_masks(I: RootIdeal, lp) -> list[int]:
    """Element masks of the chain of ideals generated by rows ℓ, ℓ-1, ..., n."""
    from .poset import generated_by_mask
    P = lp.poset
    masks = [1 << P.bottom]
    amask = 0
    for level in chain_character_sets(I):
        for a in _atoms_of(lp, I, level):
            amask |= 1 << a
        Q = generated_by_mask(P, amask)
        if Q.rk == len(masks) and Q.rk < P.rk:
            masks.append(Q.mask)
    return masks


def height_distribution(I: RootIdeal) -> tuple[int, ...]:
    return stats(I).heights


__all__ = [
    "Root", "RootIdeal", "IdealStats", "positive_system", "root_leq", "ideal_closure",
    "full_ideal", "is_ideal", "antichains", "all_ideals", "stats", "extension",
    "coefficient_matrices", "build_arrangement_from_ideal", "predicted_exponents",
    "lemma_exponents", "guided_atom_order", "sss_chain_masks", "parse_root_expr",
    "root_label", "simple_roots_matrix",
]
