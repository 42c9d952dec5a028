"""Projective points, transformations, and the generalized cross-ratio invariant.

Points of RP^{n-1} are stored in a canonical homogeneous form (first nonzero
coordinate scaled to 1) so that equality of points, tuples and invariant sets
is plain structural equality.  The unordered cross ratio of an augmented basis
is a complete invariant of the configuration up to projective equivalence, and
`projectively_equivalent` decides that equivalence directly, with a search
over ordered (n+1)-point assignments instead of the full permutation group.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations
from typing import Iterable, Optional, Sequence, Union

from . import exactq
from .errors import (
    CapExceededError,
    DegenerateBasisError,
    DimensionMismatchError,
    NotAugmentedBasisError,
    SingularError,
    SizeMismatchError,
    ZeroVectorError,
)
from .exactq import QMatrix, format_rational, rational

#: Largest m for which unordered_cross_ratio will enumerate all m! orderings.
DEFAULT_PERMUTATION_CAP = 8


class ProjPoint:
    """A point of RP^{n-1} in canonical homogeneous coordinates."""

    __slots__ = ("coords",)

    def __init__(self, coords: Iterable[int | str | Fraction]):
        raw = tuple(rational(c) for c in coords)
        if not raw:
            raise ZeroVectorError("empty coordinate vector")
        pivot = next((c for c in raw if c != 0), None)
        if pivot is None:
            raise ZeroVectorError("all homogeneous coordinates are zero")
        object.__setattr__(self, "coords", tuple(c / pivot for c in raw))

    def __setattr__(self, name, value):
        raise AttributeError("ProjPoint is immutable")

    @property
    def n(self) -> int:
        return len(self.coords)

    def affine_value(self) -> Optional[Fraction]:
        """x2/x1 for a point [x1 : x2] of RP^1; None for the point at infinity."""
        if self.coords[0] == 0:
            return None
        return self.coords[1] / self.coords[0]

    def serialized(self) -> tuple[str, ...]:
        return tuple(format_rational(c) for c in self.coords)

    def __eq__(self, other) -> bool:
        return isinstance(other, ProjPoint) and self.coords == other.coords

    def __hash__(self) -> int:
        return hash(self.coords)

    def __repr__(self) -> str:
        return "[" + " : ".join(self.serialized()) + "]"


class ProjTransform:
    """An invertible transformation of RP^{n-1}, canonical up to scale.

    The representing matrix is rescaled so its first nonzero entry in
    row-major order is 1; equality of transforms is equality of matrices.
    """

    __slots__ = ("matrix",)

    def __init__(self, matrix: QMatrix):
        if matrix.nrows != matrix.ncols:
            raise DimensionMismatchError("projective transform matrix must be square")
        if exactq.det(matrix) == 0:
            raise SingularError("projective transform matrix must be invertible")
        pivot = next(x for row in matrix.rows for x in row if x != 0)
        object.__setattr__(self, "matrix", matrix * (1 / pivot))

    def __setattr__(self, name, value):
        raise AttributeError("ProjTransform is immutable")

    @property
    def n(self) -> int:
        return self.matrix.nrows

    def apply(self, point: ProjPoint) -> ProjPoint:
        return ProjPoint(self.matrix.matvec(point.coords))

    __call__ = apply

    def inverse(self) -> "ProjTransform":
        return ProjTransform(exactq.inverse(self.matrix))

    def compose(self, other: "ProjTransform") -> "ProjTransform":
        """The transform `self after other`."""
        return ProjTransform(self.matrix * other.matrix)

    def __eq__(self, other) -> bool:
        return isinstance(other, ProjTransform) and self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash(self.matrix)

    def __repr__(self) -> str:
        return f"ProjTransform({self.matrix!r})"


def _common_dimension(points: Sequence[ProjPoint]) -> int:
    n = points[0].n
    if any(p.n != n for p in points):
        raise DimensionMismatchError("points live in different projective spaces")
    return n


def general_position(points: Sequence[ProjPoint]) -> bool:
    """True iff every n of the homogeneous coordinate vectors are independent.

    Equivalently, every (n+1)-subset of the points is a projective basis.
    """
    pts = list(points)
    if not pts:
        raise DimensionMismatchError("no points given")
    n = _common_dimension(pts)
    if len(pts) < n + 1:
        raise DimensionMismatchError(f"need at least {n + 1} points in RP^{n - 1}")
    for subset in combinations(pts, n):
        if exactq.rank(QMatrix([p.coords for p in subset])) < n:
            return False
    return True


class AugmentedBasis:
    """m >= n+2 points of RP^{n-1} in general position."""

    __slots__ = ("points", "n")

    def __init__(self, points: Iterable[ProjPoint]):
        pts = tuple(points)
        if not pts:
            raise NotAugmentedBasisError("no points given")
        n = pts[0].n
        if len(pts) < n + 2:
            raise NotAugmentedBasisError(
                f"augmented basis in RP^{n - 1} needs at least {n + 2} points, got {len(pts)}"
            )
        if not general_position(pts):
            raise NotAugmentedBasisError("points are not in general position")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "n", n)

    def __setattr__(self, name, value):
        raise AttributeError("AugmentedBasis is immutable")

    @property
    def m(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __eq__(self, other) -> bool:
        return isinstance(other, AugmentedBasis) and self.points == other.points

    def __hash__(self) -> int:
        return hash(self.points)

    def __repr__(self) -> str:
        return f"AugmentedBasis({list(self.points)!r})"


class CrossRatioTuple:
    """Ordered tuple of m-(n+1) points: one ordered cross-ratio value."""

    __slots__ = ("entries",)

    def __init__(self, entries: Iterable[ProjPoint]):
        object.__setattr__(self, "entries", tuple(entries))

    def __setattr__(self, name, value):
        raise AttributeError("CrossRatioTuple is immutable")

    def sort_key(self) -> tuple[tuple[str, ...], ...]:
        return tuple(p.serialized() for p in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __eq__(self, other) -> bool:
        return isinstance(other, CrossRatioTuple) and self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __repr__(self) -> str:
        return f"CrossRatioTuple({list(self.entries)!r})"


class UnorderedCrossRatio:
    """Deduplicated set of cross-ratio tuples over all orderings.

    Stored sorted by the lexicographic order on serialized rationals, so
    equality, hashing and serialization are deterministic.
    """

    __slots__ = ("tuples",)

    def __init__(self, tuples: Iterable[CrossRatioTuple | tuple[ProjPoint, ...]]):
        normalized = {
            t if isinstance(t, CrossRatioTuple) else CrossRatioTuple(t)
            for t in tuples
        }
        if not normalized:
            raise ZeroVectorError("unordered cross ratio cannot be empty")
        ordered = tuple(sorted(normalized, key=CrossRatioTuple.sort_key))
        object.__setattr__(self, "tuples", ordered)

    def __setattr__(self, name, value):
        raise AttributeError("UnorderedCrossRatio is immutable")

    def __len__(self) -> int:
        return len(self.tuples)

    def __iter__(self):
        return iter(self.tuples)

    def __contains__(self, item) -> bool:
        if not isinstance(item, CrossRatioTuple):
            item = CrossRatioTuple(item)
        return item in set(self.tuples)

    def __eq__(self, other) -> bool:
        return isinstance(other, UnorderedCrossRatio) and self.tuples == other.tuples

    def __hash__(self) -> int:
        return hash(self.tuples)

    def __repr__(self) -> str:
        return f"UnorderedCrossRatio({list(self.tuples)!r})"


PointsLike = Union[AugmentedBasis, Sequence[ProjPoint]]


def _as_basis(points: PointsLike) -> AugmentedBasis:
    if isinstance(points, AugmentedBasis):
        return points
    return AugmentedBasis(points)


def basis_transform(ordered: Sequence[ProjPoint]) -> ProjTransform:
    """The unique transform sending n+1 ordered basis points to the standard
    projective basis ([e_1], ..., [e_n], [e_1 + ... + e_n])."""
    pts = list(ordered)
    n = _common_dimension(pts)
    if len(pts) != n + 1:
        raise DimensionMismatchError(f"expected {n + 1} points, got {len(pts)}")
    span = QMatrix([[pts[j].coords[i] for j in range(n)] for i in range(n)])
    lam = exactq.solve(span, pts[n].coords)
    if lam is None or any(x == 0 for x in lam):
        raise DegenerateBasisError("points do not form a projective basis")
    scaled_cols = QMatrix(
        [[lam[j] * pts[j].coords[i] for j in range(n)] for i in range(n)]
    )
    try:
        return ProjTransform(exactq.inverse(scaled_cols))
    except SingularError as exc:
        raise DegenerateBasisError("points do not form a projective basis") from exc


def ordered_cross_ratio(points: PointsLike) -> CrossRatioTuple:
    """Images of the trailing points under the transform normalizing the
    first n+1 to the standard projective basis."""
    basis = _as_basis(points)
    head = basis.points[: basis.n + 1]
    q = basis_transform(head)
    return CrossRatioTuple(q(p) for p in basis.points[basis.n + 1 :])


def unordered_cross_ratio(
    points: PointsLike, cap: int = DEFAULT_PERMUTATION_CAP
) -> UnorderedCrossRatio:
    """The set of ordered cross ratios over all m! orderings, deduplicated.

    Permutations factor through (ordered head) x (ordered tail), so only
    m!/(m-n-1)! normalizing transforms are actually computed.
    """
    basis = _as_basis(points)
    m, n = basis.m, basis.n
    if m > cap:
        raise CapExceededError(
            f"{m}! orderings exceed the cap of {cap} points; raise the cap explicitly"
        )
    pts = basis.points
    seen: set[CrossRatioTuple] = set()
    for head in permutations(range(m), n + 1):
        q = basis_transform([pts[i] for i in head])
        images = tuple(q(pts[i]) for i in range(m) if i not in head)
        for tail in permutations(images):
            seen.add(CrossRatioTuple(tail))
    return UnorderedCrossRatio(seen)


def projectively_equivalent(
    left: PointsLike, right: PointsLike
) -> Optional[ProjTransform]:
    """A transform mapping the left point set onto the right one, or None.

    Any witness must send the first n+1 left points to some ordered
    (n+1)-subset of the right points; each of the m(m-1)...(m-n) assignments
    determines a unique candidate, which is tested exactly.  The search
    order is deterministic, so identical inputs yield the identity.
    """
    a = _as_basis(left)
    b = _as_basis(right)
    if a.n != b.n or a.m != b.m:
        raise SizeMismatchError(
            f"configurations of shape (m={a.m}, n={a.n}) and (m={b.m}, n={b.n})"
        )
    n, m = a.n, a.m
    to_std = basis_transform(a.points[: n + 1])
    target = set(b.points)
    for head in permutations(range(m), n + 1):
        from_std = basis_transform([b.points[i] for i in head]).inverse()
        candidate = from_std.compose(to_std)
        if all(candidate(p) in target for p in a.points):
            return candidate
    return None


def dualize(hyperplane_coeffs: Sequence[int | str | Fraction]) -> ProjPoint:
    """The dual point of the hyperplane with the given coefficient functional."""
    return ProjPoint(hyperplane_coeffs)
