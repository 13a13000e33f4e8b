"""Exact linear algebra over the rationals (small dense matrices)."""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence


def integer_row(row: Sequence) -> tuple[int, ...]:
    """Positive rescaling of a rational row to coprime integers."""
    den = 1
    for q in row:
        den = lcm(den, Fraction(q).denominator)
    ints = [int(Fraction(q) * den) for q in row]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return tuple(ints)


def rank(rows: Sequence[Sequence]) -> int:
    """Rank by fraction-free (Bareiss) elimination."""
    mat = [list(integer_row(r)) for r in rows if any(r)]
    if not mat:
        return 0
    ncols = len(mat[0])
    r, prev = 0, 1
    for c in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        p = mat[r][c]
        for i in range(r + 1, len(mat)):
            f = mat[i][c]
            row_i, row_r = mat[i], mat[r]
            mat[i] = [(p * row_i[j] - f * row_r[j]) // prev for j in range(ncols)]
        prev = p
        r += 1
        if r == len(mat):
            break
    return r


def rref(rows: Sequence[Sequence], ncols: int | None = None) -> tuple[list[list[Fraction]], list[int]]:
    mat = [[Fraction(v) for v in r] for r in rows]
    if ncols is None:
        ncols = len(mat[0]) if mat else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        p = mat[r][c]
        mat[r] = [v / p for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of {v : rows @ v = 0}, one vector per free column."""
    red, pivots = rref(rows, ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def inverse(matrix: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(matrix)
    aug = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(matrix)]
    red, pivots = rref(aug, n)
    if pivots != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def solve(matrix: Sequence[Sequence], rhs: Sequence) -> list[Fraction] | None:
    """Unique solution of a square system, or ``None`` if singular."""
    n = len(matrix)
    aug = [[Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    red, pivots = rref(aug, n)
    if pivots != list(range(n)):
        return None
    return [row[n] for row in red]


class AffineChart:
    """Parametrization p = base + basis @ u of the solution set of equality rows.

    Rows are (offset, coeffs...) meaning offset + coeffs . p = 0.  The free
    coordinates u are the non-pivot columns of the reduced system, so the chart
    is determined by the equality span alone.
    """

    def __init__(self, equalities: Sequence[Sequence], dim: int):
        self.dim = dim
        aug = [list(r[1:]) + [-Fraction(r[0])] for r in equalities if any(r)]
        red, pivots = rref(aug, dim + 1) if aug else ([], [])
        if dim in pivots:
            raise ValueError("inconsistent equalities")
        self.pivots = pivots
        self.free = [c for c in range(dim) if c not in pivots]
        self.base = [Fraction(0)] * dim
        for row, pc in zip(red, pivots):
            self.base[pc] = row[dim]
        # columns of the basis matrix, one per free coordinate
        self.columns = []
        for f in self.free:
            col = [Fraction(0)] * dim
            col[f] = Fraction(1)
            for row, pc in zip(red, pivots):
                col[pc] = -row[f]
            self.columns.append(col)

    @property
    def rank(self) -> int:
        return len(self.free)

    def lift(self, u: Sequence) -> tuple[Fraction, ...]:
        p = list(self.base)
        for uj, col in zip(u, self.columns):
            if uj:
                for i, c in enumerate(col):
                    if c:
                        p[i] += uj * c
        return tuple(p)

    def project(self, p: Sequence) -> tuple[Fraction, ...]:
        return tuple(Fraction(p[f]) for f in self.free)

    def pull_back(self, row: Sequence) -> tuple[Fraction, ...]:
        """(offset, coeffs) on p  ->  (offset', coeffs') on u."""
        coeffs = row[1:]
        offset = Fraction(row[0]) + sum((Fraction(c) * b for c, b in zip(coeffs, self.base) if c), Fraction(0))
        return (offset, *(sum((Fraction(c) * v for c, v in zip(coeffs, col) if c and v), Fraction(0))
                          for col in self.columns))

    def transform_matrix(self) -> list[list[int]]:
        """Integer matrix T with row @ T proportional (positively) to ``pull_back(row)``."""
        cols = [[Fraction(1)] + list(self.base)]
        cols += [[Fraction(0)] + list(col) for col in self.columns]
        den = 1
        for col in cols:
            for q in col:
                den = lcm(den, q.denominator)
        return [[int(cols[j][i] * den) for j in range(len(cols))] for i in range(self.dim + 1)]
