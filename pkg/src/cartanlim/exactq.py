"""Exact rational scalars and dense exact linear algebra.

Scalars are `fractions.Fraction` (canonical by construction: reduced, positive
denominator), matrices are immutable row-major grids of them.  Elimination is
fraction-free in the Bareiss style, so nothing in this module ever touches
floating point and every equality test downstream is a structural comparison.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import lcm, prod
from typing import Iterable, Optional, Sequence

from .errors import (
    DimensionMismatchError,
    EmptyInputError,
    NonSquareError,
    SingularError,
)

Rational = Fraction

_RATIONAL_RE = re.compile(r"[+-]?\d+(?:/[1-9]\d*)?")


def rational(value: int | str | Fraction) -> Fraction:
    """Coerce ints, `p/q` strings and Fractions to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot interpret {value!r} as a rational")


def parse_rational(text: str) -> Fraction:
    """Parse the wire format `p` / `p/q` (q > 0); reject anything else."""
    if not isinstance(text, str) or _RATIONAL_RE.fullmatch(text) is None:
        raise ValueError(f"not a rational literal: {text!r}")
    return Fraction(text)


def format_rational(value: Fraction) -> str:
    """Serialize as `p/q`, with `/q` omitted when the denominator is 1."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class QMatrix:
    """Immutable dense matrix of Fractions."""

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable[int | str | Fraction]]):
        grid = tuple(tuple(rational(x) for x in row) for row in rows)
        if not grid or not grid[0]:
            raise EmptyInputError("matrix needs at least one row and one column")
        width = len(grid[0])
        if any(len(row) != width for row in grid):
            raise DimensionMismatchError("ragged rows")
        object.__setattr__(self, "rows", grid)

    def __setattr__(self, name, value):
        raise AttributeError("QMatrix is immutable")

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls([[Fraction(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, values: Sequence[int | str | Fraction]) -> "QMatrix":
        vals = [rational(v) for v in values]
        n = len(vals)
        return cls([[vals[i] if i == j else Fraction(0) for j in range(n)] for i in range(n)])

    def entry(self, i: int, j: int) -> Fraction:
        return self.rows[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.rows[i]

    def col(self, j: int) -> tuple[Fraction, ...]:
        return tuple(row[j] for row in self.rows)

    def transpose(self) -> "QMatrix":
        return QMatrix(zip(*self.rows))

    def __eq__(self, other) -> bool:
        return isinstance(other, QMatrix) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __add__(self, other: "QMatrix") -> "QMatrix":
        if self.shape != other.shape:
            raise DimensionMismatchError(f"cannot add {self.shape} and {other.shape}")
        return QMatrix(
            [a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)
        )

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        return self + (-other)

    def __neg__(self) -> "QMatrix":
        return QMatrix([-x for x in row] for row in self.rows)

    def __mul__(self, other):
        if isinstance(other, QMatrix):
            if self.ncols != other.nrows:
                raise DimensionMismatchError(
                    f"cannot multiply {self.shape} by {other.shape}"
                )
            cols = other.transpose().rows
            return QMatrix(
                [sum(a * b for a, b in zip(row, col)) for col in cols]
                for row in self.rows
            )
        scalar = rational(other)
        return QMatrix([x * scalar for x in row] for row in self.rows)

    def __rmul__(self, other):
        return self * other

    def matvec(self, vec: Sequence[int | str | Fraction]) -> tuple[Fraction, ...]:
        v = [rational(x) for x in vec]
        if len(v) != self.ncols:
            raise DimensionMismatchError("vector length does not match column count")
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.rows)

    def to_strings(self) -> list[list[str]]:
        return [[format_rational(x) for x in row] for row in self.rows]

    def __repr__(self) -> str:
        body = "; ".join(
            " ".join(format_rational(x) for x in row) for row in self.rows
        )
        return f"QMatrix[{body}]"


def block_diag(*mats: QMatrix) -> QMatrix:
    """Direct sum of square matrices."""
    sizes = []
    for m in mats:
        if m.nrows != m.ncols:
            raise NonSquareError("block_diag expects square blocks")
        sizes.append(m.nrows)
    total = sum(sizes)
    grid = [[Fraction(0)] * total for _ in range(total)]
    offset = 0
    for m in mats:
        for i, row in enumerate(m.rows):
            for j, x in enumerate(row):
                grid[offset + i][offset + j] = x
        offset += m.nrows
    return QMatrix(grid)


def _scaled_integer_rows(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[int]], list[int]]:
    # Per-row denominator clearing: preserves rank, scales det by the product.
    scaled, factors = [], []
    for row in rows:
        d = 1
        for x in row:
            d = lcm(d, x.denominator)
        scaled.append([int(x * d) for x in row])
        factors.append(d)
    return scaled, factors


def _fraction_free_echelon(
    rows: list[list[int]], pivot_limit: Optional[int] = None
) -> tuple[int, int, int, list[int]]:
    """Bareiss forward elimination in place.

    Pivots are searched in the first `pivot_limit` columns (all columns when
    None).  Intermediate entries stay integer minors of the input, so the
    two-step division is exact.  Returns (rank, swap sign, last pivot,
    pivot column indices).
    """
    m = len(rows)
    width = len(rows[0])
    limit = width if pivot_limit is None else pivot_limit
    prev = 1
    sign = 1
    pivot_cols: list[int] = []
    r = 0
    for c in range(limit):
        if r == m:
            break
        piv = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
            sign = -sign
        pivot = rows[r][c]
        for i in range(r + 1, m):
            head = rows[i][c]
            for j in range(c + 1, width):
                rows[i][j] = (rows[i][j] * pivot - head * rows[r][j]) // prev
            rows[i][c] = 0
        prev = pivot
        pivot_cols.append(c)
        r += 1
    return r, sign, prev, pivot_cols


def rank(matrix: QMatrix) -> int:
    """Exact row rank over the rationals."""
    scaled, _ = _scaled_integer_rows(matrix.rows)
    r, _, _, _ = _fraction_free_echelon(scaled)
    return r


def det(matrix: QMatrix) -> Fraction:
    """Exact determinant of a square matrix."""
    if matrix.nrows != matrix.ncols:
        raise NonSquareError(f"determinant of a {matrix.shape} matrix")
    scaled, factors = _scaled_integer_rows(matrix.rows)
    r, sign, last, _ = _fraction_free_echelon(scaled)
    if r < matrix.nrows:
        return Fraction(0)
    return Fraction(sign * last, prod(factors))


def inverse(matrix: QMatrix) -> QMatrix:
    """Exact inverse via rational Gauss-Jordan elimination."""
    if matrix.nrows != matrix.ncols:
        raise NonSquareError(f"inverse of a {matrix.shape} matrix")
    n = matrix.nrows
    aug = [
        list(matrix.rows[i]) + [Fraction(i == j) for j in range(n)]
        for i in range(n)
    ]
    for c in range(n):
        piv = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if piv is None:
            raise SingularError("matrix is not invertible")
        if piv != c:
            aug[c], aug[piv] = aug[piv], aug[c]
        head = aug[c][c]
        aug[c] = [x / head for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return QMatrix([row[n:] for row in aug])


def solve(
    matrix: QMatrix, rhs: Sequence[int | str | Fraction]
) -> Optional[tuple[Fraction, ...]]:
    """Some exact solution of A·x = b, or None when inconsistent.

    Free variables are set to zero, so the solution is unique exactly when A
    has full column rank.
    """
    b = [rational(x) for x in rhs]
    if len(b) != matrix.nrows:
        raise DimensionMismatchError("right-hand side length does not match rows")
    ncols = matrix.ncols
    aug_rows = [list(row) + [bi] for row, bi in zip(matrix.rows, b)]
    scaled, _ = _scaled_integer_rows(aug_rows)
    r, _, _, pivot_cols = _fraction_free_echelon(scaled, pivot_limit=ncols)
    for i in range(r, len(scaled)):
        if scaled[i][ncols] != 0:
            return None
    x = [Fraction(0)] * ncols
    for i in reversed(range(r)):
        pc = pivot_cols[i]
        acc = Fraction(scaled[i][ncols])
        for j in range(pc + 1, ncols):
            if scaled[i][j]:
                acc -= scaled[i][j] * x[j]
        x[pc] = acc / scaled[i][pc]
    return tuple(x)


def affine_hull_dim(points: Sequence[Sequence[int | str | Fraction]]) -> int:
    """Dimension of the smallest affine subspace containing the points.

    Computed as the rank of the matrix of differences p_i - p_0.
    """
    pts = [tuple(rational(x) for x in p) for p in points]
    if not pts:
        raise EmptyInputError("affine hull of an empty point set")
    width = len(pts[0])
    if any(len(p) != width for p in pts):
        raise DimensionMismatchError("points of unequal length")
    if len(pts) == 1:
        return 0
    base = pts[0]
    diffs = [[x - y for x, y in zip(p, base)] for p in pts[1:]]
    scaled, _ = _scaled_integer_rows(diffs)
    r, _, _, _ = _fraction_free_echelon(scaled)
    return r
