"""Exact integer and rational linear algebra.

Normal forms (Hermite, Smith) with unimodular witnesses, lattice
saturation, quotient bases, and GF(2) solvers.  Everything here works on
arbitrary-precision Python integers; there is no floating point anywhere
in this module.  Matrices are small (tens of rows at most), so the
algorithms favour determinism over asymptotic speed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence


class NotSaturated(ValueError):
    """Raised when a quotient by a non-saturated sublattice is requested."""


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix, row-major entries."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix dimensions")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entries length does not match rows*cols")
        for e in self.entries:
            if not isinstance(e, int):
                raise TypeError("IntMatrix entries must be int, got %r" % (e,))

    @staticmethod
    def from_rows(rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if rows:
            ncols = len(rows[0])
            if any(len(r) != ncols for r in rows):
                raise ValueError("ragged rows")
        else:
            ncols = 0 if cols is None else cols
        flat = tuple(int(x) for r in rows for x in r)
        return IntMatrix(len(rows), ncols, flat)

    @staticmethod
    def from_columns(columns: Sequence[Sequence[int]], rows: Optional[int] = None) -> "IntMatrix":
        cols = [list(c) for c in columns]
        if cols:
            nrows = len(cols[0])
            if any(len(c) != nrows for c in cols):
                raise ValueError("ragged columns")
        else:
            nrows = 0 if rows is None else rows
        flat = tuple(int(cols[j][i]) for i in range(nrows) for j in range(len(cols)))
        return IntMatrix(nrows, len(cols), flat)

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @staticmethod
    def zero(rows: int, cols: int) -> "IntMatrix":
        return IntMatrix(rows, cols, (0,) * (rows * cols))

    def at(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def column(self, j: int) -> tuple:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            self.cols,
            self.rows,
            tuple(self.at(i, j) for j in range(self.cols) for i in range(self.rows)),
        )

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in matrix product")
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                out.append(sum(ri[k] * other.at(k, j) for k in range(self.cols)))
        return IntMatrix(self.rows, other.cols, tuple(out))

    def apply(self, vector: Sequence[int]) -> tuple:
        if len(vector) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(
            sum(self.at(i, k) * vector[k] for k in range(self.cols)) for i in range(self.rows)
        )

    def det(self) -> int:
        """Exact determinant by fraction-free Bareiss elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = self.to_rows()
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                pivot_row = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if pivot_row is None:
                    return 0
                a[k], a[pivot_row] = a[pivot_row], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
                a[i][k] = 0
            prev = a[k][k]
        return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class SnfResult:
    """Smith normal form of an integer matrix with transformation witnesses.

    ``left_transform @ input @ right_transform`` is diagonal with the
    invariant factors ``d_1 | d_2 | ... | d_r`` on the diagonal (ones
    included), padded with zeros up to the matrix shape.
    """

    invariant_factors: tuple
    left_transform: IntMatrix
    right_transform: IntMatrix
    rank: int

    def diagonal_matrix(self, rows: int, cols: int) -> IntMatrix:
        d = [[0] * cols for _ in range(rows)]
        for i, f in enumerate(self.invariant_factors):
            d[i][i] = f
        return IntMatrix.from_rows(d, cols=cols)


@dataclass(frozen=True)
class QuotientBasis:
    """Coordinates for the quotient of an ambient lattice by a saturated sublattice.

    ``projection`` maps ambient coordinates onto Z^quotient_rank with kernel
    exactly the Q-span of the sublattice intersected with the ambient lattice.
    The choice of projection is non-canonical; consumers must be invariant
    under it.
    """

    ambient_rank: int
    sublattice_generators: IntMatrix
    projection: IntMatrix
    quotient_rank: int


def _swap_rows(a, i, j):
    a[i], a[j] = a[j], a[i]


def _swap_cols(a, i, j):
    for row in a:
        row[i], row[j] = row[j], row[i]


def _add_row(a, dst, src, factor):
    a[dst] = [x + factor * y for x, y in zip(a[dst], a[src])]


def _add_col(a, dst, src, factor):
    for row in a:
        row[dst] += factor * row[src]


def _scale_row(a, i, factor):
    a[i] = [factor * x for x in a[i]]


def _scale_col(a, j, factor):
    for row in a:
        row[j] *= factor


def smith_normal_form(m: IntMatrix) -> SnfResult:
    """Smith normal form by gcd row/column elimination.

    Pivots on the minimal nonzero absolute value (ties broken by position)
    so the run is deterministic.  Returns the invariant factors, ones
    included, together with unimodular left/right witnesses.
    """
    a = m.to_rows()
    nr, nc = m.rows, m.cols
    left = IntMatrix.identity(nr).to_rows()
    right = IntMatrix.identity(nc).to_rows()

    t = 0
    while True:
        pivot = None
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                v = abs(a[i][j])
                if v != 0 and (best is None or v < best):
                    best = v
                    pivot = (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        if pi != t:
            _swap_rows(a, t, pi)
            _swap_rows(left, t, pi)
        if pj != t:
            _swap_cols(a, t, pj)
            _swap_cols(right, t, pj)

        while True:
            # Clear the pivot column.
            dirty = False
            for i in range(t + 1, nr):
                if a[i][t] == 0:
                    continue
                q = a[i][t] // a[t][t]
                _add_row(a, i, t, -q)
                _add_row(left, i, t, -q)
                if a[i][t] != 0:
                    _swap_rows(a, t, i)
                    _swap_rows(left, t, i)
                    dirty = True
            if dirty:
                continue
            # Clear the pivot row.
            for j in range(t + 1, nc):
                if a[t][j] == 0:
                    continue
                q = a[t][j] // a[t][t]
                _add_col(a, j, t, -q)
                _add_col(right, j, t, -q)
                if a[t][j] != 0:
                    _swap_cols(a, t, j)
                    _swap_cols(right, t, j)
                    dirty = True
            if dirty:
                continue
            # Enforce divisibility of the remaining block by the pivot.
            offender = None
            for i in range(t + 1, nr):
                for j in range(t + 1, nc):
                    if a[i][j] % a[t][t] != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            _add_row(a, t, offender, 1)
            _add_row(left, t, offender, 1)

        if a[t][t] < 0:
            _scale_row(a, t, -1)
            _scale_row(left, t, -1)
        t += 1
        if t == min(nr, nc):
            break

    factors = tuple(a[i][i] for i in range(min(nr, nc)) if a[i][i] != 0)
    return SnfResult(
        invariant_factors=factors,
        left_transform=IntMatrix.from_rows(left, cols=nr),
        right_transform=IntMatrix.from_rows(right, cols=nc),
        rank=len(factors),
    )


def hermite_normal_form(m: IntMatrix) -> tuple:
    """Column-style Hermite normal form.

    Returns ``(hnf, transform)`` with ``m @ transform == hnf``, transform
    unimodular.  The result is lower-triangular echelon with positive
    pivots; entries left of a pivot in its row are reduced into
    ``[0, pivot)``.
    """
    a = m.to_rows()
    nr, nc = m.rows, m.cols
    u = IntMatrix.identity(nc).to_rows()

    c = 0
    for i in range(nr):
        if c >= nc:
            break
        # gcd-collapse row i over columns >= c into column c
        while True:
            nonzero = [j for j in range(c, nc) if a[i][j] != 0]
            if not nonzero:
                break
            jmin = min(nonzero, key=lambda j: (abs(a[i][j]), j))
            if jmin != c:
                _swap_cols(a, c, jmin)
                _swap_cols(u, c, jmin)
            done = True
            for j in range(c + 1, nc):
                if a[i][j] == 0:
                    continue
                q = a[i][j] // a[i][c]
                _add_col(a, j, c, -q)
                _add_col(u, j, c, -q)
                if a[i][j] != 0:
                    done = False
            if done:
                break
        if c < nc and a[i][c] != 0:
            if a[i][c] < 0:
                _scale_col(a, c, -1)
                _scale_col(u, c, -1)
            for j in range(c):
                q = a[i][j] // a[i][c]
                if q != 0:
                    _add_col(a, j, c, -q)
                    _add_col(u, j, c, -q)
            c += 1

    return IntMatrix.from_rows(a, cols=nc), IntMatrix.from_rows(u, cols=nc)


def unimodular_inverse(u: IntMatrix) -> IntMatrix:
    """Exact inverse of a unimodular integer matrix."""
    if u.rows != u.cols:
        raise ValueError("inverse of a non-square matrix")
    n = u.rows
    aug = [[Fraction(u.at(i, j)) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
           for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise ValueError("matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = Fraction(1, 1) / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    out = []
    for i in range(n):
        for j in range(n):
            v = aug[i][n + j]
            if v.denominator != 1:
                raise ValueError("matrix is not unimodular")
            out.append(int(v))
    return IntMatrix(n, n, tuple(out))


def saturate(sublattice: IntMatrix, ambient_rank: int) -> IntMatrix:
    """Generators of (Q-span of the columns) intersected with Z^ambient_rank.

    The result is returned in column Hermite normal form, so equal
    saturations compare equal.
    """
    if sublattice.rows != ambient_rank:
        raise ValueError("sublattice columns must live in Z^ambient_rank")
    snf = smith_normal_form(sublattice)
    r = snf.rank
    if r == 0:
        return IntMatrix.zero(ambient_rank, 0)
    linv = unimodular_inverse(snf.left_transform)
    gens = IntMatrix.from_columns([linv.column(i) for i in range(r)], rows=ambient_rank)
    hnf, _ = hermite_normal_form(gens)
    keep = [j for j in range(hnf.cols) if any(hnf.at(i, j) != 0 for i in range(hnf.rows))]
    return IntMatrix.from_columns([hnf.column(j) for j in keep], rows=ambient_rank)


def quotient_basis(sublattice: IntMatrix, ambient_rank: int) -> QuotientBasis:
    """Projection coordinates for Z^ambient_rank / (saturated sublattice)."""
    if sublattice.rows != ambient_rank:
        raise ValueError("sublattice columns must live in Z^ambient_rank")
    snf = smith_normal_form(sublattice)
    r = snf.rank
    if any(f != 1 for f in snf.invariant_factors):
        raise NotSaturated(
            "sublattice is not saturated (invariant factors %s)" % (snf.invariant_factors,)
        )
    proj_rows = [snf.left_transform.row(i) for i in range(r, ambient_rank)]
    projection = IntMatrix.from_rows(proj_rows, cols=ambient_rank)
    return QuotientBasis(
        ambient_rank=ambient_rank,
        sublattice_generators=sublattice,
        projection=projection,
        quotient_rank=ambient_rank - r,
    )


def f2_solve(m: IntMatrix, rhs: Sequence[int]) -> Optional[tuple]:
    """One solution of (m mod 2) x == rhs over GF(2), or None if insoluble."""
    if len(rhs) != m.rows:
        raise ValueError("rhs length must equal the number of rows")
    a = [[m.at(i, j) & 1 for j in range(m.cols)] + [int(rhs[i]) & 1] for i in range(m.rows)]
    nr, nc = m.rows, m.cols
    pivots = []
    row = 0
    for col in range(nc):
        piv = next((r for r in range(row, nr) if a[r][col]), None)
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        for r in range(nr):
            if r != row and a[r][col]:
                a[r] = [x ^ y for x, y in zip(a[r], a[row])]
        pivots.append((row, col))
        row += 1
        if row == nr:
            break
    for r in range(row, nr):
        if a[r][nc] and not any(a[r][:nc]):
            return None
    x = [0] * nc
    for r, c in pivots:
        x[c] = a[r][nc]
    return tuple(x)


def f2_rank(m: IntMatrix) -> int:
    """Rank of m mod 2 over GF(2)."""
    a = [[m.at(i, j) & 1 for j in range(m.cols)] for i in range(m.rows)]
    rank = 0
    for col in range(m.cols):
        piv = next((r for r in range(rank, m.rows) if a[r][col]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for r in range(m.rows):
            if r != rank and a[r][col]:
                a[r] = [x ^ y for x, y in zip(a[r], a[rank])]
        rank += 1
        if rank == m.rows:
            break
    return rank


def rational_rank(rows: Sequence[Sequence]) -> int:
    """Rank over Q of a matrix given as a sequence of rows (ints or Fractions)."""
    a = [[Fraction(x) for x in row] for row in rows]
    if not a:
        return 0
    nr, nc = len(a), len(a[0])
    rank = 0
    for col in range(nc):
        piv = next((r for r in range(rank, nr) if a[r][col] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = 1 / a[rank][col]
        a[rank] = [x * inv for x in a[rank]]
        for r in range(nr):
            if r != rank and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[rank])]
        rank += 1
        if rank == nr:
            break
    return rank


def solve_unique_rational(rows: Sequence[Sequence], rhs: Sequence) -> Optional[tuple]:
    """Unique rational solution of ``rows @ x == rhs``.

    Returns None when the system is inconsistent or underdetermined, so a
    caller needing "exists and is unique" can test in one step.
    """
    a = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(rows, rhs)]
    if not a:
        return ()
    nr = len(a)
    nc = len(a[0]) - 1
    pivots = []
    rank = 0
    for col in range(nc):
        piv = next((r for r in range(rank, nr) if a[r][col] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = 1 / a[rank][col]
        a[rank] = [x * inv for x in a[rank]]
        for r in range(nr):
            if r != rank and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[rank])]
        pivots.append(col)
        rank += 1
    for r in range(rank, nr):
        if a[r][nc] != 0:
            return None
    if rank < nc:
        return None
    x = [Fraction(0)] * nc
    for r, c in enumerate(pivots):
        x[c] = a[r][nc]
    return tuple(x)


def vector_gcd(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    return g


def primitive_vector(v: Sequence[int]) -> tuple:
    """v divided by the gcd of its entries; zero vectors are rejected."""
    g = vector_gcd(v)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in v)
