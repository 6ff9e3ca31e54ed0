"""Exact linear algebra over Q and Z: rational matrices, Hermite and Smith forms."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Vector = tuple[Fraction, ...]


def vec(values: Iterable) -> Vector:
    return tuple(Fraction(v) for v in values)


def dot(a: Sequence, b: Sequence) -> Fraction:
    return sum((Fraction(x) * y for x, y in zip(a, b)), Fraction(0))


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b) if a and b else 0


def common_denominator(values: Iterable[Fraction]) -> int:
    d = 1
    for v in values:
        d = lcm(d, Fraction(v).denominator)
    return d


def rational_gcd(values: Iterable[Fraction]) -> Fraction:
    """Positive generator of the additive subgroup of Q spanned by ``values``."""
    values = [Fraction(v) for v in values]
    d = common_denominator(values)
    g = 0
    for v in values:
        g = gcd(g, int(v * d))
    return Fraction(g, d)


@dataclass(frozen=True)
class RationalMatrix:
    rows: tuple[Vector, ...]

    @classmethod
    def of(cls, rows: Iterable[Iterable]) -> "RationalMatrix":
        rows = tuple(vec(r) for r in rows)
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged matrix")
        return cls(rows)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls.of([[int(i == j) for j in range(n)] for i in range(n)])

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0]) if self.rows else 0

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(tuple(zip(*self.rows))) if self.rows else self

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        cols = list(zip(*other.rows))
        return RationalMatrix(tuple(tuple(dot(r, c) for c in cols) for r in self.rows))

    def apply(self, v: Sequence) -> Vector:
        """Matrix times column vector."""
        return tuple(dot(r, v) for r in self.rows)

    def row_apply(self, v: Sequence) -> Vector:
        """Row vector times matrix."""
        return tuple(dot(v, c) for c in zip(*self.rows))

    def det(self) -> Fraction:
        return determinant(self.rows)

    def inverse(self) -> "RationalMatrix":
        return RationalMatrix(inverse(self.rows))

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for r in self.rows for x in r)

    def __str__(self):
        return "\n".join(" ".join(str(x) for x in r) for r in self.rows)


def rref(rows: Sequence[Sequence], field_zero=Fraction(0)) -> tuple[list[list], list[int]]:
    """Reduced row echelon form over a field; returns (matrix, pivot columns).

    Works for any field type supporting + - * / and == 0 (Fractions, Cyclotomics).
    """
    m = [[Fraction(x) if isinstance(x, int) else x for x in r] for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref([vec(r) for r in rows])[1])


def kernel(rows: Sequence[Sequence], zero=Fraction(0), one=Fraction(1)) -> list[list]:
    """Basis of the right kernel {x : A x = 0} over a field."""
    if not rows:
        raise ValueError("empty matrix")
    ncols = len(rows[0])
    m, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [zero] * ncols
        x[f] = one
        for i, p in enumerate(pivots):
            x[p] = zero - m[i][f]
        basis.append(x)
    return basis


def determinant(rows: Sequence[Sequence]) -> Fraction:
    m = [list(vec(r)) for r in rows]
    n = len(m)
    if any(len(r) != n for r in m):
        raise ValueError("determinant of a non-square matrix")
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return det


def inverse(rows: Sequence[Sequence]) -> tuple[Vector, ...]:
    n = len(rows)
    aug = [list(vec(r)) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return tuple(tuple(r[n:]) for r in red)


def solve(rows: Sequence[Sequence], rhs: Sequence) -> Vector | None:
    """Unique solution of A x = b, None if inconsistent; raises if not unique."""
    ncols = len(rows[0])
    aug = [list(vec(r)) + [Fraction(b)] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    if ncols in pivots:
        return None
    if len(pivots) != ncols:
        raise ValueError("solution is not unique")
    x = [Fraction(0)] * ncols
    for i, p in enumerate(pivots):
        x[p] = red[i][ncols]
    return tuple(x)


# --- integer normal forms ---------------------------------------------------

def hermite_normal_form(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row-style HNF of an integer matrix, zero rows removed.

    Upper triangular with positive pivots, entries above each pivot reduced
    into [0, pivot).
    """
    m = [list(map(int, r)) for r in rows]
    if not m:
        return []
    ncols = len(m[0])
    out: list[list[int]] = []
    r = 0
    for c in range(ncols):
        # gcd-reduce column c among rows r..end
        while True:
            nz = [i for i in range(r, len(m)) if m[i][c]]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(m[i][c]))
            m[r], m[p] = m[p], m[r]
            done = True
            for i in range(r + 1, len(m)):
                if m[i][c]:
                    q = m[i][c] // m[r][c]
                    m[i] = [x - q * y for x, y in zip(m[i], m[r])]
                    if m[i][c]:
                        done = False
            if done:
                break
        if r < len(m) and m[r][c]:
            if m[r][c] < 0:
                m[r] = [-x for x in m[r]]
            for i in range(r):
                q = m[i][c] // m[r][c]
                if q:
                    m[i] = [x - q * y for x, y in zip(m[i], m[r])]
            r += 1
            if r == len(m):
                break
    out = [row for row in m[:r]]
    return out


def hnf_basis(generators: Sequence[Sequence]) -> RationalMatrix:
    """Canonical triangular basis (as rows) of the lattice spanned by rational vectors.

    Raises ValueError if the generators do not span the ambient space.
    """
    gens = [vec(g) for g in generators]
    if not gens:
        raise ValueError("no generators")
    n = len(gens[0])
    d = common_denominator(x for g in gens for x in g)
    h = hermite_normal_form([[int(x * d) for x in g] for g in gens])
    if len(h) != n:
        raise ValueError(f"generators span a rank {len(h)} lattice in dimension {n}")
    return RationalMatrix.of([[Fraction(x, d) for x in row] for row in h])


def smith_normal_form(rows: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Return (D, U, V) with U A V = D diagonal, U and V unimodular, d_i | d_{i+1}."""
    a = [list(map(int, r)) for r in rows]
    nr, nc = len(a), len(a[0])
    u = [[int(i == j) for j in range(nr)] for i in range(nr)]
    v = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row dst -= q * row src
        a[dst] = [x - q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x - q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):  # col dst -= q * col src
        for row in a:
            row[dst] -= q * row[src]
        for row in v:
            row[dst] -= q * row[src]

    for t in range(min(nr, nc)):
        while True:
            entries = [(abs(a[i][j]), i, j) for i in range(t, nr) for j in range(t, nc) if a[i][j]]
            if not entries:
                break
            _, i, j = min(entries)
            swap_rows(t, i)
            swap_cols(t, j)
            clean = True
            for i in range(t + 1, nr):
                q = a[i][t] // a[t][t]
                if q:
                    add_row(i, t, q)
                if a[i][t]:
                    clean = False
            for j in range(t + 1, nc):
                q = a[t][j] // a[t][t]
                if q:
                    add_col(j, t, q)
                if a[t][j]:
                    clean = False
            if not clean:
                continue
            bad = next(((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc)
                        if a[i][j] % a[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], -1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return a, u, v


def unimodular_completion(c: Sequence[int]) -> list[list[int]]:
    """Integer matrix with determinant +-1 whose first row is the primitive vector c."""
    c = list(map(int, c))
    n = len(c)
    g = 0
    for x in c:
        g = gcd(g, x)
    if g != 1:
        raise ValueError(f"{c} is not primitive")
    # column operations W with c W = e_1; then W^{-1} has first row c
    row = list(c)
    w = [[int(i == j) for j in range(n)] for i in range(n)]
    while sum(1 for x in row if x) > 1 or row[0] == 0:
        nz = [j for j in range(n) if row[j]]
        p = min(nz, key=lambda j: abs(row[j]))
        if p != 0:
            row[0], row[p] = row[p], row[0]
            for r in w:
                r[0], r[p] = r[p], r[0]
            continue
        for j in range(1, n):
            if row[j]:
                q = row[j] // row[0]
                row[j] -= q * row[0]
                for r in w:
                    r[j] -= q * r[0]
    if row[0] < 0:
        for r in w:
            r[0] = -r[0]
    inv = inverse(w)
    out = [[int(x) for x in r] for r in inv]
    assert out[0] == c
    return out
