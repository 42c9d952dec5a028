"""Deterministic batch interface with JSON input and output.

Every invocation prints one JSON document embedding the tool version, the
seed, and a hash of the inputs.  Negative mathematical verdicts are data and
exit 0; malformed input exits 2; capped or undecided outcomes exit 3.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import __version__, jsonio
from .bounds import verify_bounds
from .converge import convergence_report
from .errors import (
    CapExceededError,
    CartanlimError,
    ParseError,
    SampleCapExceededError,
)
from .exactq import format_rational, parse_rational
from .limits import (
    alpha_conjugacy_class,
    alpha_orbit,
    are_conjugate,
    exceptional_dual_basis,
    orbit_dimension,
)
from .obstruct import flag_tier_profile, flatness_check, has_tier_one_element, tier
from .projgeo import ordered_cross_ratio, projectively_equivalent, unordered_cross_ratio

TOOL = "cartanlim"

EXIT_OK = 0
EXIT_BAD_INPUT = 2
EXIT_UNRESOLVED = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=TOOL, description="exact seed-matrix group computations with JSON I/O"
    )
    parser.add_argument("--output", help="also write the document to this path")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--cap", type=int, default=8, help="ordering-enumeration cap (default 8)")
        p.add_argument("--seed", type=int, default=0, help="seed for all sampling (default 0)")
        p.add_argument("--tolerance", type=float, default=1e-12, help="numeric tolerance (default 1e-12)")

    p = sub.add_parser("cross-ratio", help="ordered and unordered cross ratio of a configuration")
    p.add_argument("basis", help="augmented basis JSON file")
    common(p)

    p = sub.add_parser("equivalent", help="decide projective equivalence of two configurations")
    p.add_argument("left", help="augmented basis JSON file")
    p.add_argument("right", help="augmented basis JSON file")
    common(p)

    p = sub.add_parser("seed-conjugate", help="decide conjugacy of two seed groups")
    p.add_argument("left", help="seed JSON file")
    p.add_argument("right", help="seed JSON file")
    common(p)

    p = sub.add_parser("orbit-dim", help="classify a point under the seed group action")
    p.add_argument("seed_file", help="seed JSON file")
    p.add_argument("point", help="point JSON file")
    common(p)

    p = sub.add_parser("alpha-orbit", help="parameters conjugate to a given one-parameter seed")
    p.add_argument("--alpha", required=True, help="rational parameter, e.g. 3 or -7/2")
    common(p)

    p = sub.add_parser("converge", help="trace the diagonal-group degeneration onto a target")
    p.add_argument("seed_file", help="seed JSON file")
    p.add_argument("params", help="parameters JSON file")
    p.add_argument(
        "--r-schedule",
        default="10,100,1000",
        help="comma-separated increasing r values (default 10,100,1000)",
    )
    common(p)

    p = sub.add_parser("obstruct", help="flatness, tier, and rank-one obstructions")
    ob = p.add_subparsers(dest="subcommand", required=True)
    for name, arg, desc in (
        ("flat", "group", "flatness of a polynomial family"),
        ("tier", "group", "max rank of rho(v) - I over a generic sample"),
        ("tier-one", "family", "existence of a rank-one direction in a linear block"),
        ("flag", "seed_file", "tier profile of the nested coordinate subgroups"),
    ):
        q = ob.add_parser(name, help=desc)
        q.add_argument(arg)
        q.add_argument("--sample-cap", type=int, default=2000, help="certifying-sample cap (default 2000)")
        common(q)

    p = sub.add_parser("bounds", help="verify the closed-form dimension bounds")
    p.add_argument("--k-range", required=True, help="inclusive range lo:hi, e.g. 7:200")
    common(p)

    return parser


def _load_json(path: str) -> tuple[object, bytes]:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(raw.decode("utf-8")), raw
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from exc


def _parse_schedule(text: str) -> list[Fraction]:
    try:
        return [parse_rational(part.strip()) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise ParseError(f"bad r schedule {text!r}: {exc}") from exc


def _parse_k_range(text: str) -> tuple[int, int]:
    parts = text.split(":")
    if len(parts) != 2:
        raise ParseError(f"bad k range {text!r}; expected lo:hi")
    try:
        lo, hi = int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise ParseError(f"bad k range {text!r}: {exc}") from exc
    return lo, hi


def _run(args: argparse.Namespace) -> tuple[dict, dict, list[bytes], int]:
    """Returns (flags document, result document, input file bytes, exit code)."""
    flags = {
        "cap": getattr(args, "cap", 8),
        "seed": getattr(args, "seed", 0),
        "tolerance": getattr(args, "tolerance", 1e-12),
    }
    exit_code = EXIT_OK
    raw_inputs: list[bytes] = []

    def load(path: str, reader, *reader_args):
        obj, raw = _load_json(path)
        raw_inputs.append(raw)
        return reader(obj, *reader_args) if reader_args else reader(obj)

    if args.command == "cross-ratio":
        basis = load(args.basis, jsonio.read_basis)
        ordered = ordered_cross_ratio(basis)
        uc = unordered_cross_ratio(basis, cap=args.cap)
        result = {
            "m": basis.m,
            "n": basis.n,
            "ordered": jsonio.tuple_doc(ordered),
            "unordered": jsonio.uc_doc(uc),
        }
    elif args.command == "equivalent":
        left = load(args.left, jsonio.read_basis)
        right = load(args.right, jsonio.read_basis)
        witness = projectively_equivalent(left, right)
        within_cap = left.m <= args.cap
        result = {
            "conjugate": witness is not None,
            "witness": jsonio.matrix_doc(witness.matrix) if witness else None,
            "uc_left": jsonio.uc_doc(unordered_cross_ratio(left, cap=args.cap))
            if within_cap
            else None,
            "uc_right": jsonio.uc_doc(unordered_cross_ratio(right, cap=args.cap))
            if within_cap
            else None,
        }
    elif args.command == "seed-conjugate":
        left = load(args.left, jsonio.read_seed)
        right = load(args.right, jsonio.read_seed)
        witness = are_conjugate(left, right)
        within_cap = left.m <= args.cap
        result = {
            "conjugate": witness is not None,
            "witness": jsonio.matrix_doc(witness) if witness is not None else None,
            "uc_left": jsonio.uc_doc(
                unordered_cross_ratio(exceptional_dual_basis(left), cap=args.cap)
            )
            if within_cap
            else None,
            "uc_right": jsonio.uc_doc(
                unordered_cross_ratio(exceptional_dual_basis(right), cap=args.cap)
            )
            if within_cap
            else None,
        }
    elif args.command == "orbit-dim":
        seed = load(args.seed_file, jsonio.read_seed)
        point = load(args.point, jsonio.read_point)
        result = jsonio.orbit_class_doc(orbit_dimension(seed, point))
    elif args.command == "alpha-orbit":
        try:
            alpha = parse_rational(args.alpha)
        except ValueError as exc:
            raise ParseError(f"bad alpha {args.alpha!r}: {exc}") from exc
        flags["alpha"] = format_rational(alpha)
        points = alpha_orbit(alpha)
        result = {
            "alpha": format_rational(alpha),
            "points": [jsonio.point_doc(p) for p in points],
            "affine_values": [
                format_rational(v) if (v := p.affine_value()) is not None else "inf"
                for p in points
            ],
            "conjugate_params": [
                format_rational(b) for b in alpha_conjugacy_class(alpha)
            ],
        }
    elif args.command == "converge":
        seed = load(args.seed_file, jsonio.read_seed)
        params = load(args.params, jsonio.read_params, seed)
        schedule = _parse_schedule(args.r_schedule)
        flags["r_schedule"] = [format_rational(r) for r in schedule]
        trace = convergence_report(seed, params, schedule, tolerance=args.tolerance)
        result = jsonio.trace_doc(trace)
    elif args.command == "obstruct":
        flags["sample_cap"] = args.sample_cap
        if args.subcommand == "flat":
            group = load(args.group, jsonio.read_group)
            result = jsonio.flatness_doc(flatness_check(group, cap=args.sample_cap))
        elif args.subcommand == "tier":
            group = load(args.group, jsonio.read_group)
            result = jsonio.tier_doc(tier(group, seed=args.seed))
        elif args.subcommand == "tier-one":
            family = load(args.family, jsonio.read_family)
            verdict = has_tier_one_element(family, seed=args.seed)
            result = jsonio.tier_one_doc(verdict)
            if verdict.kind == "Undecided":
                exit_code = EXIT_UNRESOLVED
        else:
            seed = load(args.seed_file, jsonio.read_seed)
            profile = flag_tier_profile(seed, seed=args.seed)
            result = {"profile": list(profile), "tier": profile[-1]}
    elif args.command == "bounds":
        lo, hi = _parse_k_range(args.k_range)
        flags["k_range"] = f"{lo}:{hi}"
        reports = verify_bounds(lo, hi)
        result = {
            "reports": [jsonio.bounds_doc(r) for r in reports],
            "all_ok": all(r.ok for r in reports),
        }
    else:  # pragma: no cover - argparse enforces the choices
        raise ParseError(f"unknown command {args.command!r}")
    return flags, result, raw_inputs, exit_code


def _input_hash(flags: dict, raw_inputs: list[bytes]) -> str:
    digest = hashlib.sha256()
    digest.update(jsonio.dumps(flags).encode("utf-8"))
    for raw in raw_inputs:
        digest.update(b"\x00")
        digest.update(raw)
    return digest.hexdigest()


def _emit(document: dict, output: Optional[str]) -> None:
    text = jsonio.dumps(document)
    print(text)
    if output:
        Path(output).write_text(text + "\n", encoding="utf-8")


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_BAD_INPUT if exc.code not in (0, None) else 0
    command = args.command
    if getattr(args, "subcommand", None):
        command = f"{command} {args.subcommand}"
    try:
        flags, result, raw_inputs, exit_code = _run(args)
    except (CapExceededError, SampleCapExceededError) as exc:
        document = {
            "tool": TOOL,
            "version": __version__,
            "command": command,
            "seed": getattr(args, "seed", 0),
            "error": {"type": type(exc).__name__, "message": str(exc)},
        }
        _emit(document, args.output)
        return EXIT_UNRESOLVED
    except CartanlimError as exc:
        document = {
            "tool": TOOL,
            "version": __version__,
            "command": command,
            "seed": getattr(args, "seed", 0),
            "error": {"type": type(exc).__name__, "message": str(exc)},
        }
        _emit(document, args.output)
        return EXIT_BAD_INPUT
    document = {
        "tool": TOOL,
        "version": __version__,
        "command": command,
        "seed": flags["seed"],
        "flags": flags,
        "input_hash": _input_hash(flags, raw_inputs),
        "result": result,
    }
    _emit(document, args.output)
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
