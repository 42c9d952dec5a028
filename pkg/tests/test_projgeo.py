import random
from fractions import Fraction as F
from itertools import permutations

import pytest

from cartanlim.errors import (
    CapExceededError,
    DegenerateBasisError,
    DimensionMismatchError,
    NotAugmentedBasisError,
    SizeMismatchError,
    ZeroVectorError,
)
from cartanlim.projgeo import (
    AugmentedBasis,
    CrossRatioTuple,
    ProjPoint,
    ProjTransform,
    UnorderedCrossRatio,
    basis_transform,
    dualize,
    general_position,
    ordered_cross_ratio,
    projectively_equivalent,
    unordered_cross_ratio,
)
from cartanlim.exactq import QMatrix

from util import random_augmented_basis, random_invertible


def P(*coords):
    return ProjPoint(coords)


def alpha_points(alpha):
    return [P(1, 0), P(1, 1), P(1, 2), P(1, alpha)]


def six_expressions(a: F) -> set[F]:
    return {
        2 * (a - 1) / a,
        a / (2 * (a - 1)),
        a / (2 - a),
        (2 - a) / a,
        2 * (a - 1) / (a - 2),
        (a - 2) / (2 * (a - 1)),
    }


# --- canonical forms -----------------------------------------------------------


def test_projpoint_canonical():
    assert P(2, 4).coords == (F(1), F(2))
    assert P(0, -3).coords == (F(0), F(1))
    assert P(2, 4) == P(1, 2)


def test_projpoint_zero_rejected():
    with pytest.raises(ZeroVectorError):
        P(0, 0)


def test_projtransform_canonical_scale():
    t1 = ProjTransform(QMatrix([[2, 0], [0, 2]]))
    assert t1.matrix == QMatrix.identity(2)
    t2 = ProjTransform(QMatrix([[0, 3], [-3, 0]]))
    assert t2.matrix == QMatrix([[0, 1], [-1, 0]])


def test_dualize_examples():
    assert dualize([1, 0]) == P(1, 0)
    assert dualize([2, 4]) == P(1, 2)
    assert dualize([0, -3]) == P(0, 1)


# --- general position -------------------------------------------------------------


def test_general_position_examples():
    assert general_position([P(1, 0), P(0, 1), P(1, 1)]) is True
    assert general_position([P(1, 0), P(1, 0), P(0, 1)]) is False
    assert general_position(alpha_points(3)) is True


def test_general_position_mixed_dims():
    with pytest.raises(DimensionMismatchError):
        general_position([P(1, 0), P(1, 0, 0), P(0, 1)])


# --- basis transform -----------------------------------------------------------------


def test_basis_transform_standard_is_identity():
    q = basis_transform([P(1, 0), P(0, 1), P(1, 1)])
    assert q.matrix == QMatrix.identity(2)


def test_basis_transform_swap():
    q = basis_transform([P(0, 1), P(1, 0), P(1, 1)])
    assert q.matrix == QMatrix([[0, 1], [1, 0]])


def test_basis_transform_alpha_line():
    # hand-computed: the normalizer of ([1:0],[1:1],[1:2]) sends [1:alpha] to
    # a vector with first/second ratio 2(alpha-1)/alpha, i.e. 4/3 at alpha=3
    q = basis_transform([P(1, 0), P(1, 1), P(1, 2)])
    image = q(P(1, 3))
    assert image == P(1, F(3, 4))
    assert image.coords[0] / image.coords[1] == F(4, 3)


def test_basis_transform_degenerate():
    with pytest.raises(DegenerateBasisError):
        basis_transform([P(1, 0), P(2, 0), P(1, 1)])


def test_basis_transform_equivariance():
    rng = random.Random(3)
    pts = [P(1, 0), P(1, 1), P(1, -2)]
    q0 = ProjTransform(random_invertible(rng, 2))
    lhs = basis_transform([q0(p) for p in pts])
    rhs = basis_transform(pts).compose(q0.inverse())
    assert lhs == rhs


# --- ordered cross ratio ------------------------------------------------------------


def test_ordered_identity_when_head_is_standard():
    pts = [P(1, 0, 0), P(0, 1, 0), P(0, 0, 1), P(1, 1, 1), P(1, 2, 3)]
    t = ordered_cross_ratio(pts)
    assert t.entries == (P(1, 2, 3),)


def test_ordered_needs_augmented_basis():
    with pytest.raises(NotAugmentedBasisError):
        ordered_cross_ratio([P(1, 0, 0), P(0, 1, 0), P(0, 0, 1), P(1, 1, 1)])


def test_ordered_alpha_values():
    # identity ordering lands on alpha/(2(alpha-1)); swapping the first two
    # points gives the reciprocal 2(alpha-1)/alpha, the other member of the pair
    for alpha in (F(3), F(5), F(-7, 2)):
        pts = alpha_points(alpha)
        ident = ordered_cross_ratio(pts).entries[0]
        assert ident == P(1, alpha / (2 * (alpha - 1)))
        swapped = ordered_cross_ratio([pts[1], pts[0], pts[2], pts[3]]).entries[0]
        assert swapped == P(1, 2 * (alpha - 1) / alpha)


# --- unordered cross ratio -------------------------------------------------------------


def brute_force_uc(points):
    out = set()
    for perm in permutations(points):
        out.add(ordered_cross_ratio(list(perm)))
    return UnorderedCrossRatio(out)


def test_uc_matches_six_expressions():
    for alpha in (F(3), F(-1), F(4)):
        uc = unordered_cross_ratio(alpha_points(alpha))
        expected = UnorderedCrossRatio(
            {CrossRatioTuple([P(1, v)]) for v in six_expressions(alpha)}
        )
        assert uc == expected


def test_uc_alpha3_affine_values():
    uc = unordered_cross_ratio(alpha_points(3))
    values = {t.entries[0].affine_value() for t in uc}
    assert values == {F(4, 3), F(3, 4), F(-3), F(-1, 3), F(4), F(1, 4)}


def test_uc_alpha_minus1_matches_alpha3():
    left = unordered_cross_ratio(alpha_points(3))
    right = unordered_cross_ratio(alpha_points(-1))
    assert left == right


def test_uc_harmonic_collapses():
    uc = unordered_cross_ratio(alpha_points(F(2, 3)))
    values = {t.entries[0].affine_value() for t in uc}
    assert values == {F(-1), F(1, 2), F(2)}


def test_uc_equals_brute_force_enumeration():
    rng = random.Random(11)
    basis = random_augmented_basis(rng, 3, 5)
    assert unordered_cross_ratio(basis) == brute_force_uc(basis.points)


def test_uc_size_divides_six_on_line():
    for alpha in (F(3), F(2, 3), F(-5), F(9, 4)):
        uc = unordered_cross_ratio(alpha_points(alpha))
        assert 6 % len(uc) == 0 and len(uc) >= 1


def test_uc_cap():
    pts = [P(1, t) for t in range(9)]
    with pytest.raises(CapExceededError):
        unordered_cross_ratio(pts)
    # raising the cap unlocks the computation
    assert len(unordered_cross_ratio(pts[:5], cap=8)) > 0


def test_uc_invariant_under_transform():
    rng = random.Random(5)
    for _ in range(6):
        basis = random_augmented_basis(rng, 2, 5)
        q = ProjTransform(random_invertible(rng, 2))
        moved = AugmentedBasis([q(p) for p in basis.points])
        assert unordered_cross_ratio(moved) == unordered_cross_ratio(basis)


# --- projective equivalence ---------------------------------------------------------------


def test_equivalent_identity():
    basis = AugmentedBasis(alpha_points(3))
    witness = projectively_equivalent(basis, basis)
    assert witness is not None
    assert witness.matrix == QMatrix.identity(2)


def test_equivalent_constructed_witness():
    rng = random.Random(9)
    for n, m in ((2, 4), (3, 5)):
        basis = random_augmented_basis(rng, n, m)
        q0 = ProjTransform(random_invertible(rng, n))
        shuffled = list(basis.points)
        rng.shuffle(shuffled)
        moved = AugmentedBasis([q0(p) for p in shuffled])
        witness = projectively_equivalent(basis, moved)
        assert witness is not None
        assert {witness(p) for p in basis.points} == set(moved.points)


def test_equivalent_alpha3_vs_alpha5_fails():
    got = projectively_equivalent(
        AugmentedBasis(alpha_points(3)), AugmentedBasis(alpha_points(5))
    )
    assert got is None
    assert six_expressions(F(3)) != six_expressions(F(5))


def test_equivalent_agrees_with_uc():
    rng = random.Random(21)
    for _ in range(8):
        a = random_augmented_basis(rng, 2, 4)
        b = random_augmented_basis(rng, 2, 4)
        same = unordered_cross_ratio(a) == unordered_cross_ratio(b)
        assert (projectively_equivalent(a, b) is not None) == same


def test_equivalent_size_mismatch():
    with pytest.raises(SizeMismatchError):
        projectively_equivalent(
            AugmentedBasis(alpha_points(3)),
            AugmentedBasis(alpha_points(3) + [P(1, 7)]),
        )
