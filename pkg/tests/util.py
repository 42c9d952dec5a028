"""Shared helpers for the test suite: CLI capture and seeded generators."""

from __future__ import annotations

import contextlib
import io
import json
import random
from fractions import Fraction
from pathlib import Path

from cartanlim import (
    AugmentedBasis,
    GroupElementParams,
    ProjPoint,
    QMatrix,
    SeedMatrix,
    affine_hull_dim,
    det,
    general_position,
    group_action,
)
from cartanlim.cli import main

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def run_cli(argv: list[str]) -> tuple[int, str]:
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(argv)
    return code, buf.getvalue()


def manifest_cases() -> list[dict]:
    manifest = json.loads((FIXTURES / "manifest.json").read_text())
    return manifest["cases"]


def resolve_argv(argv: list[str]) -> list[str]:
    out = []
    for arg in argv:
        if arg.endswith(".json") and (FIXTURES / arg).exists():
            out.append(str(FIXTURES / arg))
        else:
            out.append(arg)
    return out


def random_fraction(rng: random.Random, span: int = 4, max_den: int = 3) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, max_den))


def random_point(rng: random.Random, n: int) -> ProjPoint:
    while True:
        coords = [Fraction(rng.randint(-4, 4)) for _ in range(n)]
        if any(coords):
            return ProjPoint(coords)


def random_augmented_basis(rng: random.Random, n: int, m: int) -> AugmentedBasis:
    while True:
        points = []
        seen = set()
        while len(points) < m:
            p = random_point(rng, n)
            if p not in seen:
                seen.add(p)
                points.append(p)
        if general_position(points):
            return AugmentedBasis(points)


def random_invertible(rng: random.Random, n: int) -> QMatrix:
    while True:
        mat = QMatrix([[random_fraction(rng, 3, 2) for _ in range(n)] for _ in range(n)])
        if det(mat) != 0:
            return mat


def random_generic_seed(rng: random.Random, m: int, n: int) -> SeedMatrix:
    while True:
        try:
            seed = SeedMatrix(
                [[Fraction(rng.randint(-4, 4)) for _ in range(n)] for _ in range(m)]
            )
        except Exception:
            continue
        if seed.generic:
            return seed


def random_params(rng: random.Random, seed: SeedMatrix) -> GroupElementParams:
    return GroupElementParams.make(
        [random_fraction(rng) for _ in range(seed.m)],
        [random_fraction(rng) for _ in range(seed.n)],
    )


def orbit_hull_dim(seed: SeedMatrix, point: ProjPoint, samples: int = 200) -> int:
    """Independent oracle: affine-hull dimension of sampled orbit points.

    The tail coordinates are invariant under the action and one is nonzero
    unless the point is fixed, so dehomogenizing by the first nonzero
    invariant coordinate puts all orbit samples in one affine chart.
    """
    d = seed.m + seed.n
    params = [GroupElementParams.zero(seed)]
    for s in range(d):
        unit = [Fraction(int(t == s)) for t in range(d)]
        params.append(GroupElementParams.make(unit[: seed.m], unit[seed.m :]))
        params.append(
            GroupElementParams.make(
                [2 * x for x in unit[: seed.m]], [2 * x for x in unit[seed.m :]]
            )
        )
    rng = random.Random(20240601)
    while len(params) < samples:
        params.append(
            GroupElementParams.make(
                [Fraction(rng.randint(-5, 5)) for _ in range(seed.m)],
                [Fraction(rng.randint(-5, 5)) for _ in range(seed.n)],
            )
        )
    tail = point.coords[seed.m + 1 :]
    pivot = next((i for i, x in enumerate(tail) if x != 0), None)
    chart_index = (
        seed.m + 1 + pivot
        if pivot is not None
        else next(i for i, x in enumerate(point.coords) if x != 0)
    )
    vectors = []
    for p in params:
        image = group_action(seed, p, point)
        scale = image.coords[chart_index]
        vectors.append(tuple(x / scale for x in image.coords))
    return affine_hull_dim(vectors)
