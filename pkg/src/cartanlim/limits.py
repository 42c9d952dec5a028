"""The block-unipotent limit family attached to an m x n seed matrix.

A seed matrix T determines an abelian group of unipotent (m+n+1)-square
matrices, parameterized by m+n rationals.  This module builds those matrices,
computes the projective action and its orbit-dimension classification, and
decides conjugacy of two seed groups through the projective equivalence of
their dual exceptional-hyperplane configurations.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Optional, Sequence

from . import exactq, projgeo
from .errors import (
    DegenerateAlphaError,
    DimensionMismatchError,
    IndexOutOfRangeError,
    NotGenericError,
    ShapeMismatchError,
    SingularError,
    TooFewRowsError,
    ZeroRowError,
)
from .exactq import QMatrix, block_diag, rational
from .projgeo import AugmentedBasis, ProjPoint, dualize, projectively_equivalent


class SeedMatrix:
    """An m x n rational matrix with no zero row, defining one limit group."""

    def __init__(self, rows: Iterable[Iterable[int | str | Fraction]] | QMatrix):
        matrix = rows if isinstance(rows, QMatrix) else QMatrix(rows)
        for idx, row in enumerate(matrix.rows):
            if all(x == 0 for x in row):
                raise ZeroRowError(f"row {idx + 1} of the seed matrix is zero")
        self.matrix = matrix

    @property
    def m(self) -> int:
        return self.matrix.nrows

    @property
    def n(self) -> int:
        return self.matrix.ncols

    @property
    def ambient(self) -> int:
        """Size of the matrices in the group: m + n + 1."""
        return self.m + self.n + 1

    @cached_property
    def generic(self) -> bool:
        """True iff every choice of n rows is linearly independent."""
        if self.m < self.n:
            return False
        for subset in combinations(self.matrix.rows, self.n):
            if exactq.det(QMatrix(subset)) == 0:
                return False
        return True

    def row(self, j: int) -> tuple[Fraction, ...]:
        """Row j, 1-based."""
        if not 1 <= j <= self.m:
            raise IndexOutOfRangeError(f"row index {j} outside 1..{self.m}")
        return self.matrix.rows[j - 1]

    def __eq__(self, other) -> bool:
        return isinstance(other, SeedMatrix) and self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash(self.matrix)

    def __repr__(self) -> str:
        return f"SeedMatrix({self.matrix!r})"


@dataclass(frozen=True)
class GroupElementParams:
    """Parameter vector (a_1..a_m, b_1..b_n) of one group element."""

    a: tuple[Fraction, ...]
    b: tuple[Fraction, ...]

    @classmethod
    def make(
        cls,
        a: Sequence[int | str | Fraction],
        b: Sequence[int | str | Fraction],
    ) -> "GroupElementParams":
        return cls(tuple(rational(x) for x in a), tuple(rational(x) for x in b))

    @classmethod
    def zero(cls, seed: SeedMatrix) -> "GroupElementParams":
        return cls((Fraction(0),) * seed.m, (Fraction(0),) * seed.n)

    def __add__(self, other: "GroupElementParams") -> "GroupElementParams":
        return GroupElementParams(
            tuple(x + y for x, y in zip(self.a, other.a)),
            tuple(x + y for x, y in zip(self.b, other.b)),
        )


def is_generic(seed: SeedMatrix) -> bool:
    """Whether every n x n row-submatrix of the seed is nonsingular."""
    if seed.m < seed.n:
        raise TooFewRowsError(f"need at least {seed.n} rows, got {seed.m}")
    return seed.generic


def _check_params(seed: SeedMatrix, params: GroupElementParams) -> None:
    if len(params.a) != seed.m or len(params.b) != seed.n:
        raise DimensionMismatchError(
            f"parameters of shape ({len(params.a)}, {len(params.b)}) "
            f"for a seed with (m, n) = ({seed.m}, {seed.n})"
        )


def rho(seed: SeedMatrix, params: GroupElementParams) -> QMatrix:
    """The group element: identity plus an upper-right (m+1) x n block whose
    row j is a_j times row j of the seed, with bottom block row b."""
    _check_params(seed, params)
    m, n = seed.m, seed.n
    k = m + n + 1
    grid = [[Fraction(i == j) for j in range(k)] for i in range(k)]
    for j in range(m):
        aj = params.a[j]
        for i in range(n):
            grid[j][m + 1 + i] = seed.matrix.rows[j][i] * aj
    for i in range(n):
        grid[m][m + 1 + i] = params.b[i]
    return QMatrix(grid)


def phi(seed: SeedMatrix, j: int, w: Sequence[int | str | Fraction]) -> Fraction:
    """The j-th exceptional linear functional (1-based) on the tail coordinates."""
    row = seed.row(j)
    vals = [rational(x) for x in w]
    if len(vals) != seed.n:
        raise DimensionMismatchError(f"expected {seed.n} tail coordinates")
    return sum((t * x for t, x in zip(row, vals)), Fraction(0))


def group_action(
    seed: SeedMatrix, params: GroupElementParams, point: ProjPoint
) -> ProjPoint:
    """Image of a point of RP^{m+n} under the group element.

    Coordinate j <= m gains a_j * phi_j(tail), coordinate m+1 gains the
    b-weighted sum of the tail, and the n tail coordinates are unchanged.
    """
    _check_params(seed, params)
    m, n = seed.m, seed.n
    if point.n != m + n + 1:
        raise DimensionMismatchError(
            f"point has {point.n} coordinates, expected {m + n + 1}"
        )
    coords = list(point.coords)
    tail = coords[m + 1 :]
    for j in range(m):
        coords[j] += params.a[j] * sum(
            (t * x for t, x in zip(seed.matrix.rows[j], tail)), Fraction(0)
        )
    coords[m] += sum((bi * x for bi, x in zip(params.b, tail)), Fraction(0))
    return ProjPoint(coords)


class OrbitKind(Enum):
    FIXED = "Fixed"
    EXCEPTIONAL = "Exceptional"
    TYPICAL = "Typical"


@dataclass(frozen=True)
class OrbitClass:
    kind: OrbitKind
    dim: int
    vanishing: frozenset[int]


def orbit_dimension(seed: SeedMatrix, point: ProjPoint) -> OrbitClass:
    """Classify a point by the dimension of its orbit closure.

    Points with zero tail are fixed.  Otherwise the dimension is 1 plus the
    number of nonvanishing functionals phi_j at the tail: each nonvanishing
    phi_j contributes an independent affine direction and the b-row always
    contributes one.  The maximum m+1 marks the point as typical.
    """
    m, n = seed.m, seed.n
    if point.n != m + n + 1:
        raise DimensionMismatchError(
            f"point has {point.n} coordinates, expected {m + n + 1}"
        )
    tail = point.coords[m + 1 :]
    if all(x == 0 for x in tail):
        return OrbitClass(OrbitKind.FIXED, 0, frozenset(range(1, m + 1)))
    vanishing = frozenset(
        j for j in range(1, m + 1) if phi(seed, j, tail) == 0
    )
    dim = 1 + (m - len(vanishing))
    kind = OrbitKind.TYPICAL if dim == m + 1 else OrbitKind.EXCEPTIONAL
    return OrbitClass(kind, dim, vanishing)


# The acceptance-facing name for the same classification.
classify_point = orbit_dimension


def exceptional_dual_basis(seed: SeedMatrix) -> AugmentedBasis:
    """Dual points of the m exceptional hyperplanes: the projectivized rows.

    Genericity of the seed is exactly general position of these points.
    """
    if seed.m < seed.n + 2:
        raise TooFewRowsError(
            f"need m >= n + 2 rows for an augmented basis, got m = {seed.m}"
        )
    if not seed.generic:
        raise NotGenericError("seed matrix is not generic")
    return AugmentedBasis(dualize(row) for row in seed.matrix.rows)


def conjugate_seed(seed: SeedMatrix, p: QMatrix) -> SeedMatrix:
    """The seed T·P obtained by the right action of an invertible P."""
    if p.nrows != p.ncols or p.nrows != seed.n:
        raise ShapeMismatchError(f"P must be {seed.n} x {seed.n}")
    if exactq.det(p) == 0:
        raise SingularError("P is singular")
    return SeedMatrix(seed.matrix * p)


def seed_conjugator(seed: SeedMatrix, p: QMatrix) -> QMatrix:
    """The block matrix I_{m+1} (+) P^{-1} conjugating the T-group onto the
    TP-group: it rescales the block columns by P on the right."""
    if p.nrows != p.ncols or p.nrows != seed.n:
        raise ShapeMismatchError(f"P must be {seed.n} x {seed.n}")
    return block_diag(QMatrix.identity(seed.m + 1), exactq.inverse(p))


def element_params(seed: SeedMatrix, matrix: QMatrix) -> Optional[GroupElementParams]:
    """Read the parameters of a group element off its block, or None.

    Membership is decided exactly: the candidate parameters are extracted
    from the upper-right block and the element is rebuilt and compared.
    """
    m, n = seed.m, seed.n
    k = m + n + 1
    if matrix.shape != (k, k):
        return None
    a = []
    for j in range(m):
        row = seed.matrix.rows[j]
        i0 = next(i for i, t in enumerate(row) if t != 0)
        a.append(matrix.rows[j][m + 1 + i0] / row[i0])
    b = [matrix.rows[m][m + 1 + i] for i in range(n)]
    params = GroupElementParams(tuple(a), tuple(b))
    if rho(seed, params) == matrix:
        return params
    return None


_VERIFICATION_PARAMS = (
    ((1, -1, 2), (1, 1)),
    ((2, 3, -1), (-1, 2)),
    ((1, 1, 1), (3, -2)),
)


def _verification_params(seed: SeedMatrix) -> list[GroupElementParams]:
    out = []
    for pat_a, pat_b in _VERIFICATION_PARAMS:
        a = [Fraction(pat_a[j % len(pat_a)] + (j // len(pat_a))) for j in range(seed.m)]
        b = [Fraction(pat_b[i % len(pat_b)] - (i // len(pat_b))) for i in range(seed.n)]
        out.append(GroupElementParams(tuple(a), tuple(b)))
    return out


def are_conjugate(left: SeedMatrix, right: SeedMatrix) -> Optional[QMatrix]:
    """A verified conjugator between the two seed groups, or None.

    The groups are conjugate iff the dual configurations of their seeds are
    projectively equivalent.  A dual witness W matches the rows of T·Wᵗ with
    the rows of S up to order and scale; scales are absorbed by the group
    parameters, while the row order contributes a coordinate permutation of
    the first m axes.  The returned witness is the product of that
    permutation with I_{m+1} (+) P^{-1}, rational and defined up to scale,
    and is checked by explicit conjugation before being returned.
    """
    if (left.m, left.n) != (right.m, right.n):
        raise ShapeMismatchError(
            f"seed shapes ({left.m}, {left.n}) and ({right.m}, {right.n}) differ"
        )
    for seed in (left, right):
        if not seed.generic:
            raise NotGenericError("both seeds must be generic")
    dual_witness = projectively_equivalent(
        exceptional_dual_basis(left), exceptional_dual_basis(right)
    )
    if dual_witness is None:
        return None
    p = dual_witness.matrix.transpose()
    moved = left.matrix * p
    targets = {ProjPoint(row): i for i, row in enumerate(right.matrix.rows)}
    sigma = [targets[ProjPoint(row)] for row in moved.rows]
    m, n = left.m, left.n
    k = m + n + 1
    perm = [[Fraction(0)] * k for _ in range(k)]
    for j in range(m):
        perm[sigma[j]][j] = Fraction(1)
    for i in range(m, k):
        perm[i][i] = Fraction(1)
    witness = QMatrix(perm) * block_diag(QMatrix.identity(m + 1), exactq.inverse(p))
    witness_inv = exactq.inverse(witness)
    for params in _verification_params(left):
        conjugated = witness * rho(left, params) * witness_inv
        if element_params(right, conjugated) is None:
            raise RuntimeError("conjugator failed verification; this is a bug")
    return witness


_ALPHA_DEGENERATE = (Fraction(0), Fraction(1), Fraction(2))


def alpha_seed(alpha: int | str | Fraction) -> SeedMatrix:
    """The 4 x 2 seed with rows (1,0), (1,1), (1,2), (1,alpha)."""
    a = rational(alpha)
    if a in _ALPHA_DEGENERATE:
        raise DegenerateAlphaError(f"alpha = {a} collides with a fixed row")
    return SeedMatrix([[1, 0], [1, 1], [1, 2], [1, a]])


def alpha_orbit(alpha: int | str | Fraction) -> tuple[ProjPoint, ...]:
    """The six parameter values whose groups are conjugate to the one at alpha.

    Coincidences among the six expressions shrink the set; over the rationals
    that happens exactly on the harmonic locus, where it has 3 elements.
    """
    a = rational(alpha)
    if a in _ALPHA_DEGENERATE:
        raise DegenerateAlphaError(f"alpha = {a} is degenerate")
    values = (
        2 * (a - 1) / a,
        a / (2 * (a - 1)),
        a / (2 - a),
        (2 - a) / a,
        2 * (a - 1) / (a - 2),
        (a - 2) / (2 * (a - 1)),
    )
    points = {ProjPoint((1, v)) for v in values}
    return tuple(sorted(points, key=ProjPoint.serialized))


def alpha_conjugacy_class(alpha: int | str | Fraction) -> tuple[Fraction, ...]:
    """All rational parameters beta whose seed group is conjugate to alpha's.

    Conjugacy holds exactly when the invariant sets alpha_orbit(alpha) and
    alpha_orbit(beta) are equal; solving value = beta/(2(beta-1)) for each
    invariant value gives the class.  A value of 1/2 corresponds to the point
    at infinity and contributes no rational parameter.
    """
    betas = set()
    for point in alpha_orbit(alpha):
        s = point.affine_value()
        if s is None or 2 * s - 1 == 0:
            continue
        beta = 2 * s / (2 * s - 1)
        if beta not in _ALPHA_DEGENERATE:
            betas.add(beta)
    return tuple(sorted(betas))


def normalized_slice_member(free_rows: QMatrix) -> SeedMatrix:
    """Stack I_n, the all-ones row, and the given rows into a generic seed.

    The dual configuration of such a seed begins with the standard projective
    basis, which is the normalization used by the slice of unique
    representatives.
    """
    n = free_rows.ncols
    rows: list[Sequence[Fraction]] = list(QMatrix.identity(n).rows)
    rows.append(tuple(Fraction(1) for _ in range(n)))
    rows.extend(free_rows.rows)
    try:
        seed = SeedMatrix(rows)
    except ZeroRowError as exc:
        raise NotGenericError(str(exc)) from exc
    if not seed.generic:
        raise NotGenericError("stacked matrix is not generic")
    return seed
