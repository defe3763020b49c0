"""Exact integer lattice algebra: Hermite and Smith normal forms, saturation.

Matrices are lists of rows of Python ints.  Nothing here touches floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

IntMatrix = list[list[int]]


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def mat_mul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> IntMatrix:
    if not A:
        return []
    cols = len(B[0]) if B else 0
    return [[sum(a * B[k][j] for k, a in enumerate(row) if a) for j in range(cols)]
            for row in A]


def transpose(A: Sequence[Sequence[int]], ncols: int | None = None) -> IntMatrix:
    if not A:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*A)]


def det(A: Sequence[Sequence[int]]) -> int:
    """Determinant by fraction-free Bareiss elimination."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(r) for r in A]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def _row_combine(M: IntMatrix, i: int, j: int, a: int, b: int, c: int, d: int) -> None:
    # (row_i, row_j) <- (a*row_i + b*row_j, c*row_i + d*row_j)
    ri, rj = M[i], M[j]
    M[i] = [a * x + b * y for x, y in zip(ri, rj)]
    M[j] = [c * x + d * y for x, y in zip(ri, rj)]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hermite_normal_form(M: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix]:
    """Row Hermite normal form.

    Returns (H, U) with H = U*M, U unimodular, pivots positive and the
    entries above each pivot reduced into [0, pivot).  Zero rows sit at the
    bottom of H.
    """
    H = [list(r) for r in M]
    m = len(H)
    n = len(H[0]) if m else 0
    U = identity(m)
    r = 0
    for c in range(n):
        if r == m:
            break
        for i in range(r + 1, m):
            if H[i][c] == 0:
                continue
            a, b = H[r][c], H[i][c]
            g, x, y = _xgcd(a, b)
            # [x y; -b/g a/g] has determinant 1
            _row_combine(H, r, i, x, y, -b // g, a // g)
            _row_combine(U, r, i, x, y, -b // g, a // g)
        if H[r][c] == 0:
            continue
        if H[r][c] < 0:
            H[r] = [-v for v in H[r]]
            U[r] = [-v for v in U[r]]
        p = H[r][c]
        for i in range(r):
            q = H[i][c] // p
            if q:
                H[i] = [x - q * y for x, y in zip(H[i], H[r])]
                U[i] = [x - q * y for x, y in zip(U[i], U[r])]
        r += 1
    return H, U


def hnf_basis(M: Sequence[Sequence[int]]) -> IntMatrix:
    """Nonzero rows of the Hermite form: the canonical basis of the row lattice."""
    H, _ = hermite_normal_form(M)
    return [row for row in H if any(row)]


@dataclass(frozen=True)
class SmithForm:
    diagonal: tuple[int, ...]
    left: tuple[tuple[int, ...], ...]
    right: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def smith_normal_form(M: Sequence[Sequence[int]]) -> SmithForm:
    """Smith form by elementary reduction with minimal-absolute-value pivots.

    left * M * right = D where D carries ``diagonal`` on its main diagonal
    (length min(rows, cols)), each entry dividing the next.
    """
    A = [list(r) for r in M]
    m = len(A)
    n = len(A[0]) if m else 0
    L = identity(m)
    R = identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        L[i], L[j] = L[j], L[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in R:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q*row_src
        A[dst] = [x + q * y for x, y in zip(A[dst], A[src])]
        L[dst] = [x + q * y for x, y in zip(L[dst], L[src])]

    def add_col(dst, src, q):
        for row in A:
            row[dst] += q * row[src]
        for row in R:
            row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    v = A[i][j]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), i, j)
            if best is None:
                break
            _, i, j = best
            swap_rows(t, i)
            swap_cols(t, j)
            p = A[t][t]
            done = True
            for i in range(t + 1, m):
                q = A[i][t] // p
                if q:
                    add_row(i, t, -q)
                if A[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = A[t][j] // p
                if q:
                    add_col(j, t, -q)
                if A[t][j]:
                    done = False
            if not done:
                continue
            # pivot isolated; enforce divisibility into the rest
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if t < m and t < n and A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            L[t] = [-x for x in L[t]]
    diag = tuple(A[i][i] for i in range(min(m, n)))
    return SmithForm(diag, tuple(map(tuple, L)), tuple(map(tuple, R)))


def inverse_unimodular(U: Sequence[Sequence[int]]) -> IntMatrix:
    n = len(U)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(U)]
    for c in range(n):
        piv = next(i for i in range(c, n) if aug[i][c] != 0)
        aug[c], aug[piv] = aug[piv], aug[c]
        p = aug[c][c]
        aug[c] = [x / p for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    out = []
    for row in aug:
        vals = row[n:]
        if any(v.denominator != 1 for v in vals):
            raise ValueError("matrix is not unimodular")
        out.append([int(v) for v in vals])
    return out


@dataclass(frozen=True)
class Sublattice:
    """A sublattice of Z^ambient_rank stored by its Hermite basis."""
    ambient_rank: int
    basis: tuple[tuple[int, ...], ...]

    @classmethod
    def span(cls, vectors: Sequence[Sequence[int]], ambient_rank: int) -> "Sublattice":
        vecs = [list(v) for v in vectors]
        for v in vecs:
            if len(v) != ambient_rank:
                raise ValueError("vector length does not match ambient rank")
        basis = hnf_basis(vecs) if vecs else []
        return cls(ambient_rank, tuple(tuple(r) for r in basis))

    @classmethod
    def full(cls, ambient_rank: int) -> "Sublattice":
        return cls(ambient_rank, tuple(tuple(r) for r in identity(ambient_rank)))

    @property
    def rank(self) -> int:
        return len(self.basis)


def saturate(L: Sublattice) -> tuple[Sublattice, int]:
    """Return (L_sat, [L_sat : L]) where L_sat = (Q L) intersected with Z^n."""
    if L.rank == 0:
        return L, 1
    snf = smith_normal_form(L.basis)
    W = inverse_unimodular(snf.right)
    k = snf.rank
    index = 1
    for d in snf.diagonal[:k]:
        index *= d
    return Sublattice.span(W[:k], L.ambient_rank), index


def solve_rational(rows: Sequence[Sequence[int]], v: Sequence[int]) -> Optional[list[Fraction]]:
    """Coefficients c with sum c_i rows_i = v, or None if v is outside the span.

    The rows are assumed linearly independent.
    """
    k = len(rows)
    n = len(v)
    # columns of the system: unknowns c_0..c_{k-1}, one equation per coordinate
    aug = [[Fraction(rows[i][j]) for i in range(k)] + [Fraction(v[j])] for j in range(n)]
    piv_cols = []
    r = 0
    for c in range(k):
        piv = next((i for i in range(r, n) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        p = aug[r][c]
        aug[r] = [x / p for x in aug[r]]
        for i in range(n):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        piv_cols.append(c)
        r += 1
    if any(aug[i][k] != 0 for i in range(r, n)):
        return None
    coeffs = [Fraction(0)] * k
    for i, c in enumerate(piv_cols):
        coeffs[c] = aug[i][k]
    return coeffs


def express_in_basis(v: Sequence[int], L: Sublattice) -> Optional[list[Fraction]]:
    if len(v) != L.ambient_rank:
        raise ValueError("vector length does not match ambient rank")
    return solve_rational(L.basis, v)


def contains(L: Sublattice, v: Sequence[int]) -> bool:
    c = express_in_basis(v, L)
    return c is not None and all(x.denominator == 1 for x in c)


def content_and_primitive(v: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    d = 0
    for x in v:
        d = gcd(d, x)
    if d == 0:
        raise ValueError("zero vector has no primitive part")
    return d, tuple(x // d for x in v)
