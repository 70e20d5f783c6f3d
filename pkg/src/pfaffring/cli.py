"""Command-line entry point: ``pfaffring <command> [options]``.

Exit status is 0 when every check passes, 1 when some check fails and 2 for
unusable input (bad flags, unreadable or malformed spec files).
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import suites
from .constructions import (DEFAULT_CURVE_DEGREE, DEFAULT_FAMILY_DEGREE, SpecError, instance_rng,
                            parse_curve_spec, parse_family_spec, random_curve_spec, random_family_spec)
from .pfaffian import ProfileError, parse_matrix
from .polyring import ClearingError, FieldSpec, GF32003, ParseError, RingMismatchError
from .report import VerificationReport

COMMANDS = ("verify-segre", "verify-extrasym", "curve-ring", "family", "eliminate", "branch-curve", "suite")
RANDOM_COMMANDS = ("curve-ring", "family", "eliminate", "branch-curve", "suite")

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pfaffring", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--spec", type=Path, help="spec file (ring declaration plus P3/P4/P9/t or P9 bindings)")
    p.add_argument("--matrix", type=Path, help="6x6 skew matrix file for verify-extrasym")
    p.add_argument("--seed", type=int, help="seed for random instances (required without --spec)")
    p.add_argument("--field", help="QQ or GF(p); default GF(32003)")
    p.add_argument("--degree", type=int, help="Hilbert function degree bound")
    p.add_argument("--t", dest="t", help="comma-separated t values (family) or a single t (eliminate)")
    p.add_argument("--trials", type=int, default=3, help="random instances per suite (suite only)")
    p.add_argument("--output", type=Path, help="write the JSON report here")
    p.add_argument("--no-timing", action="store_true", help="zero every millis field")
    return p


def _field(args, declared: FieldSpec | None = None) -> FieldSpec:
    try:
        requested = FieldSpec.parse(args.field) if args.field else None
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if declared is not None:
        if requested is not None and requested != declared:
            raise InputError(f"--field {requested} conflicts with the field declared in the spec file, {declared}")
        return declared
    return requested or GF32003


def _read(path: Path) -> str:
    try:
        return path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _validate(args):
    if args.command in RANDOM_COMMANDS and args.spec is None and args.seed is None:
        raise InputError(f"{args.command} needs --spec or --seed")
    if args.spec is not None and args.command not in ("curve-ring", "family", "eliminate", "branch-curve"):
        raise InputError(f"--spec does not apply to {args.command}")
    if args.matrix is not None and args.command != "verify-extrasym":
        raise InputError("--matrix only applies to verify-extrasym")
    if args.t is not None and args.command not in ("family", "eliminate"):
        raise InputError("--t only applies to family and eliminate")
    if args.degree is not None and not 0 <= args.degree <= 40:
        raise InputError("--degree must lie in 0..40")
    if args.trials < 1:
        raise InputError("--trials must be positive")


def _family_spec(args, label: str):
    if args.spec is not None:
        spec = parse_family_spec(_read(args.spec))
        _field(args, spec.field)
        return spec
    return random_family_spec(instance_rng(args.seed, label), _field(args))


def run(args) -> VerificationReport:
    _validate(args)
    cmd = args.command
    if cmd == "verify-segre":
        return suites.segre_report(_field(args))
    if cmd == "verify-extrasym":
        if args.matrix is not None:
            M = parse_matrix(_read(args.matrix))
            return suites.extrasym_report(_field(args, M.ring.field), M)
        return suites.extrasym_report(_field(args))
    if cmd == "curve-ring":
        if args.spec is not None:
            spec = parse_curve_spec(_read(args.spec))
            _field(args, spec.field)
        else:
            spec = random_curve_spec(instance_rng(args.seed, "curve"), _field(args))
        report = suites.curve_ring_report(spec, args.degree if args.degree is not None else DEFAULT_CURVE_DEGREE)
    elif cmd == "family":
        spec = _family_spec(args, "family")
        t_list = suites.parse_t_list(args.t) if args.t else [Fraction(0), Fraction(1), Fraction(7)]
        if 0 not in t_list or all(t == 0 for t in t_list):
            raise InputError("--t must include 0 and at least one nonzero value")
        report = suites.family_report(spec, t_list, args.degree if args.degree is not None else DEFAULT_FAMILY_DEGREE)
    elif cmd == "eliminate":
        spec = _family_spec(args, "family")
        if args.t is not None:
            t = suites.parse_t_list(args.t)
            if len(t) != 1:
                raise InputError("eliminate takes a single --t value")
            spec = spec.at(t[0])
        elif spec.t == 0:
            spec = spec.at(1)
        if args.spec is None:
            spec = suites.ensure_w_term(spec)
        report = suites.eliminate_report(spec, args.degree if args.degree is not None else DEFAULT_FAMILY_DEGREE)
    elif cmd == "branch-curve":
        report = suites.branch_report(_family_spec(args, "family"))
    else:
        report = suites.full_suite(args.seed, _field(args), args.trials)
    report.seed = args.seed
    return report


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        report = run(args)
    except (InputError, SpecError, ParseError, ProfileError, RingMismatchError, ClearingError,
            ValueError, ZeroDivisionError) as exc:
        print(f"pfaffring: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.no_timing:
        for c in report.checks:
            c.millis = 0
    text = report.to_json()
    if args.output is not None:
        try:
            args.output.write_text(text)
        except OSError as exc:
            print(f"pfaffring: error: cannot write {args.output}: {exc.strerror}", file=sys.stderr)
            return EXIT_INPUT
    print(report.summary())
    return EXIT_OK if report.ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
