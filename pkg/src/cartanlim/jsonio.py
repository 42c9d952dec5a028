"""Deterministic JSON wire formats.

Rationals travel as `p/q` strings, floats as 17-significant-digit decimals,
and objects are emitted with sorted keys, so identical inputs always produce
byte-identical documents.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Any, Sequence

from .converge import ConvergenceTrace
from .bounds import BoundsReport
from .errors import ParseError
from .exactq import QMatrix, format_rational, parse_rational
from .limits import GroupElementParams, OrbitClass, SeedMatrix
from .obstruct import (
    FlatnessReport,
    LinearBlockFamily,
    Poly,
    PolyParamGroup,
    TierOneResult,
    TierReport,
    builtin_block_family,
    builtin_group,
)
from .projgeo import AugmentedBasis, CrossRatioTuple, ProjPoint, UnorderedCrossRatio

# --- canonical emission -------------------------------------------------------


def _float_literal(value: float) -> str:
    if math.isnan(value) or math.isinf(value):
        raise ValueError("cannot serialize non-finite float")
    return format(value, ".17g")


def _emit(obj: Any, out: list[str]) -> None:
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, Fraction):
        out.append(json.dumps(format_rational(obj)))
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(_float_literal(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=True))
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, item in enumerate(obj):
            if i:
                out.append(", ")
            _emit(item, out)
        out.append("]")
    elif isinstance(obj, dict):
        out.append("{")
        for i, key in enumerate(sorted(obj)):
            if not isinstance(key, str):
                raise TypeError(f"non-string key {key!r}")
            if i:
                out.append(", ")
            out.append(json.dumps(key, ensure_ascii=True))
            out.append(": ")
            _emit(obj[key], out)
        out.append("}")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any) -> str:
    """Canonical JSON text: sorted keys, `p/q` rationals, 17-digit floats."""
    out: list[str] = []
    _emit(obj, out)
    return "".join(out)


# --- parsing helpers -------------------------------------------------------------


def _want(obj: Any, key: str, context: str) -> Any:
    if not isinstance(obj, dict) or key not in obj:
        raise ParseError(f"{context}: missing key {key!r}")
    return obj[key]


def read_rational(obj: Any, context: str) -> Fraction:
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, str):
        try:
            return parse_rational(obj)
        except ValueError as exc:
            raise ParseError(f"{context}: {exc}") from exc
    raise ParseError(f"{context}: expected a rational string, got {obj!r}")


def read_vector(obj: Any, context: str) -> tuple[Fraction, ...]:
    if not isinstance(obj, list):
        raise ParseError(f"{context}: expected an array")
    return tuple(read_rational(x, context) for x in obj)


def read_matrix(obj: Any, context: str) -> QMatrix:
    if not isinstance(obj, list) or not obj:
        raise ParseError(f"{context}: expected a nonempty array of rows")
    return QMatrix([read_vector(row, context) for row in obj])


def read_point(obj: Any, context: str = "point") -> ProjPoint:
    return ProjPoint(read_vector(obj, context))


def read_basis(obj: Any, context: str = "basis") -> AugmentedBasis:
    n = _want(obj, "n", context)
    points_raw = _want(obj, "points", context)
    if not isinstance(points_raw, list):
        raise ParseError(f"{context}: 'points' must be an array")
    points = [read_point(p, context) for p in points_raw]
    if any(p.n != n for p in points):
        raise ParseError(f"{context}: points do not have {n} coordinates")
    return AugmentedBasis(points)


def read_seed(obj: Any, context: str = "seed") -> SeedMatrix:
    m = _want(obj, "m", context)
    n = _want(obj, "n", context)
    rows = read_matrix(_want(obj, "rows", context), context)
    if rows.shape != (m, n):
        raise ParseError(
            f"{context}: declared shape ({m}, {n}) does not match rows {rows.shape}"
        )
    return SeedMatrix(rows)


def read_params(obj: Any, seed: SeedMatrix, context: str = "params") -> GroupElementParams:
    a = read_vector(_want(obj, "a", context), context)
    b = read_vector(_want(obj, "b", context), context)
    if len(a) != seed.m or len(b) != seed.n:
        raise ParseError(
            f"{context}: expected {seed.m} a-entries and {seed.n} b-entries"
        )
    return GroupElementParams(a, b)


def _read_poly(obj: Any, nvars: int, context: str) -> Poly:
    if not isinstance(obj, list):
        raise ParseError(f"{context}: polynomial must be an array of terms")
    terms: dict[tuple[int, ...], Fraction] = {}
    for term in obj:
        if not (isinstance(term, list) and len(term) == 2 and isinstance(term[1], list)):
            raise ParseError(f"{context}: term must be [coeff, [exponents]]")
        coeff = read_rational(term[0], context)
        exps = term[1]
        if len(exps) != nvars or not all(isinstance(e, int) and e >= 0 for e in exps):
            raise ParseError(f"{context}: bad exponent tuple {exps}")
        terms[tuple(exps)] = terms.get(tuple(exps), Fraction(0)) + coeff
    return Poly(nvars, terms)


def read_group(obj: Any, context: str = "group") -> PolyParamGroup:
    if isinstance(obj, dict) and "builtin" in obj:
        name = obj["builtin"]
        seed = read_seed(obj["seed"], context) if "seed" in obj else None
        try:
            return builtin_group(name, seed)
        except ValueError as exc:
            raise ParseError(f"{context}: {exc}") from exc
    d = _want(obj, "dim_params", context)
    ambient = _want(obj, "ambient", context)
    entries_raw = _want(obj, "entries", context)
    if not isinstance(entries_raw, list) or not all(
        isinstance(row, list) for row in entries_raw
    ):
        raise ParseError(f"{context}: 'entries' must be an array of rows")
    entries = [
        [_read_poly(cell, d, context) for cell in row] for row in entries_raw
    ]
    try:
        return PolyParamGroup(d, ambient, entries)
    except ValueError as exc:
        raise ParseError(f"{context}: {exc}") from exc


def read_family(obj: Any, context: str = "family") -> LinearBlockFamily:
    if isinstance(obj, dict) and "builtin" in obj:
        name = obj["builtin"]
        seed = read_seed(obj["seed"], context) if "seed" in obj else None
        try:
            return builtin_block_family(name, seed)
        except ValueError as exc:
            raise ParseError(f"{context}: {exc}") from exc
    coeffs = _want(obj, "coeff_matrices", context)
    if not isinstance(coeffs, list) or not coeffs:
        raise ParseError(f"{context}: 'coeff_matrices' must be a nonempty array")
    return LinearBlockFamily([read_matrix(m, context) for m in coeffs])


# --- result documents -----------------------------------------------------------


def point_doc(point: ProjPoint) -> list[str]:
    return list(point.serialized())


def vector_doc(vec: Sequence[Fraction]) -> list[str]:
    return [format_rational(x) for x in vec]


def matrix_doc(matrix: QMatrix) -> list[list[str]]:
    return matrix.to_strings()


def basis_doc(basis: AugmentedBasis) -> dict:
    return {"n": basis.n, "points": [point_doc(p) for p in basis.points]}


def seed_doc(seed: SeedMatrix) -> dict:
    return {"m": seed.m, "n": seed.n, "rows": matrix_doc(seed.matrix)}


def tuple_doc(t: CrossRatioTuple) -> list[list[str]]:
    return [point_doc(p) for p in t.entries]


def uc_doc(uc: UnorderedCrossRatio) -> list[list[list[str]]]:
    return [tuple_doc(t) for t in uc.tuples]


def orbit_class_doc(oc: OrbitClass) -> dict:
    return {
        "kind": oc.kind.value,
        "dim": oc.dim,
        "vanishing": sorted(oc.vanishing),
    }


def trace_doc(trace: ConvergenceTrace) -> dict:
    return {
        "r": [format_rational(r) for r in trace.r_values],
        "distance": list(trace.distances),
        "diag": [list(d) for d in trace.diag_entries],
    }


def bounds_doc(report: BoundsReport) -> dict:
    return {
        "k": report.k,
        "best_m": report.best_m,
        "best_n": report.best_n,
        "best_value": report.best_value,
        "lower_bound": format_rational(report.lower_bound),
        "upper_bound": report.upper_bound,
        "ok": report.ok,
    }


def flatness_doc(report: FlatnessReport) -> dict:
    return {
        "verdict": report.verdict,
        "hull_dim": report.hull_dim,
        "dim_params": report.dim_params,
        "sample_size": report.sample_size,
        "grid_sizes": list(report.grid_sizes),
        "witness_params": [vector_doc(v) for v in report.witness_params],
    }


def tier_doc(report: TierReport) -> dict:
    return {"tier": report.tier, "witness": vector_doc(report.witness)}


def _certificate_doc(steps) -> list:
    doc = []
    for step in steps:
        entry = {
            "kind": step["kind"],
            "rows": list(step["rows"]),
            "cols": list(step["cols"]),
            "monomial": list(step["monomial"]),
        }
        if step["kind"] == "minor":
            entry["forced"] = step["forced"]
        else:
            entry["cases"] = [
                {"assume": case["assume"], "steps": _certificate_doc(case["steps"])}
                for case in step["cases"]
            ]
        doc.append(entry)
    return doc


def tier_one_doc(result: TierOneResult) -> dict:
    return {
        "verdict": result.kind,
        "witness": vector_doc(result.witness) if result.witness is not None else None,
        "certificate": _certificate_doc(result.certificate)
        if result.certificate is not None
        else None,
    }
