"""Exact linear algebra over the rationals.

Vectors are lists of ``Fraction``; matrices are lists of row vectors.
Row reduction is done on integer-scaled rows (clear denominators, divide
by the gcd) so elimination stays in big-integer arithmetic, which is
considerably faster than Fraction arithmetic and just as exact.  All
pivot choices are deterministic (first nonzero column, rows in input
order), so every basis this module returns is reproducible.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

Vec = list[Fraction]
Mat = list[Vec]


def frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def zeros(n: int) -> Vec:
    return [Fraction(0)] * n


def identity(n: int) -> Mat:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def vec_add(u: Vec, v: Vec) -> Vec:
    return [a + b for a, b in zip(u, v)]


def vec_sub(u: Vec, v: Vec) -> Vec:
    return [a - b for a, b in zip(u, v)]


def vec_scale(c, v: Vec) -> Vec:
    c = frac(c)
    return [c * a for a in v]


def vec_is_zero(v: Vec) -> bool:
    return all(a == 0 for a in v)


def mat_vec(m: Mat, v: Vec) -> Vec:
    return [sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in m]


def mat_mul(a: Mat, b: Mat) -> Mat:
    bt = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def mat_sub(a: Mat, b: Mat) -> Mat:
    return [vec_sub(ra, rb) for ra, rb in zip(a, b)]


def transpose(m: Mat) -> Mat:
    return [list(col) for col in zip(*m)]


def mat_eq(a: Mat, b: Mat) -> bool:
    return len(a) == len(b) and all(ra == rb for ra, rb in zip(a, b))


def _int_row(vec) -> list[int]:
    """Scale a rational row to coprime integers."""
    den = 1
    for x in vec:
        x = frac(x)
        den = den * x.denominator // gcd(den, x.denominator)
    row = [int(frac(x) * den) for x in vec]
    g = 0
    for x in row:
        g = gcd(g, x)
    if g > 1:
        row = [x // g for x in row]
    return row


class RowSpace:
    """Incrementally maintained row-echelon basis of a span of vectors.

    Rows are stored as coprime integer vectors, one pivot column each,
    kept in increasing pivot order.  ``add`` reduces the incoming row
    against the current pivots and either absorbs it (returns True when
    it enlarged the span) or discards it.
    """

    def __init__(self, width: int):
        self.width = width
        self.rows: list[list[int]] = []
        self.pivots: list[int] = []  # pivot column of rows[i], increasing

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _reduce(self, row: list[int]) -> list[int]:
        for r, p in zip(self.rows, self.pivots):
            c = row[p]
            if c:
                rp = r[p]
                row = [rp * a - c * b for a, b in zip(row, r)]
        g = 0
        for x in row:
            g = gcd(g, x)
        if g > 1:
            row = [x // g for x in row]
        return row

    def residual(self, vec) -> list[int]:
        """Integer row left after reducing ``vec`` against the basis."""
        return self._reduce(_int_row(vec))

    def contains(self, vec) -> bool:
        return not any(self.residual(vec))

    def add(self, vec) -> bool:
        row = self.residual(vec)
        pivot = next((j for j, x in enumerate(row) if x), None)
        if pivot is None:
            return False
        if row[pivot] < 0:
            row = [-x for x in row]
        at = next((i for i, p in enumerate(self.pivots) if p > pivot), len(self.pivots))
        self.rows.insert(at, row)
        self.pivots.insert(at, pivot)
        return True

    def basis(self) -> Mat:
        out = []
        for row, p in zip(self.rows, self.pivots):
            lead = Fraction(row[p])
            out.append([Fraction(x) / lead for x in row])
        return out


def rank(mat: Mat) -> int:
    if not mat:
        return 0
    space = RowSpace(len(mat[0]))
    for row in mat:
        space.add(row)
    return space.rank


def rref(mat: Mat) -> tuple[Mat, list[int]]:
    """Reduced row echelon form with the list of pivot columns."""
    rows = [[frac(x) for x in row] for row in mat]
    ncols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        lead = rows[r][c]
        rows[r] = [x / lead for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def nullspace(mat: Mat, ncols: int | None = None) -> Mat:
    """Canonical nullspace basis: one vector per free column, with a 1
    in the free column and pivot entries back-substituted from RREF."""
    if not mat:
        return identity(ncols) if ncols else []
    ncols = len(mat[0])
    red, pivots = rref(mat)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = zeros(ncols)
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def solve(mat: Mat, rhs: Vec) -> Vec | None:
    """One exact solution of ``mat @ x = rhs``, or None if inconsistent."""
    if not mat:
        return [] if vec_is_zero(rhs) else None
    ncols = len(mat[0])
    aug = [row + [b] for row, b in zip(mat, rhs)]
    red, pivots = rref(aug)
    for row, p in zip(red, pivots):
        if p == ncols:
            return None
    x = zeros(ncols)
    for row, p in zip(red, pivots):
        x[p] = row[ncols]
    return x


def mat_inv(m: Mat) -> Mat:
    n = len(m)
    aug = [list(map(frac, row)) + identity(n)[i] for i, row in enumerate(m)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in red]


def is_orthogonal(m: Mat) -> bool:
    return mat_eq(mat_mul(transpose(m), m), identity(len(m)))


def subspace_leq(a: Mat, b: Mat) -> bool:
    """Is span(a) contained in span(b)?  Rows are spanning vectors."""
    if not a:
        return True
    space = RowSpace(len(a[0]))
    for row in b:
        space.add(row)
    return all(space.contains(row) for row in a)


def same_subspace(a: Mat, b: Mat) -> bool:
    return subspace_leq(a, b) and subspace_leq(b, a)
