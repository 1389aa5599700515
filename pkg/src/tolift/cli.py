"""Command-line front end.

Exit codes: 0 all checks verified, 1 a verification check failed,
2 usage, parse, or I/O error.  Machine-readable artifacts go to --out when
given, else stdout; diagnostics go to stderr whenever an artifact occupies
stdout.  All artifact output is byte-stable across runs: LF newlines, no
timestamps, no locale-dependent formatting.
"""

from __future__ import annotations

import argparse
import sys

from .algebra import (DEFAULT_ASSIGNMENT_CAP, FiniteAlgebra, format_algebra,
                      parse_algebra, satisfies_all)
from .complexes import (DEFAULT_SIZE_CAP, complex_algebra, lift, mask_str,
                        verify_lift)
from .errors import LiftInternalError, ParseError, ToliftError
from .liftio import read_lift, write_lift
from .relations import (DEFAULT_ENUMERATION_CAP, Tolerance, enumerate_tolerances,
                        format_relation, parse_pair_spec, parse_pairs_file,
                        parse_relation, tolerance_generated)
from .terms import IdentitySet, Signature, is_balanced_linear, is_linear, \
    parse_identity_file


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tolift",
        description="Lift tolerances of finite algebras to images of congruences.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_: str, *flags: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_)
        if "algebra" in flags:
            p.add_argument("--algebra", required=True, help="algebra file")
        if "identities" in flags:
            p.add_argument("--identities", help="identities file, one per line")
        if "identities!" in flags:
            p.add_argument("--identities", required=True,
                           help="identities file, one per line")
        if "pairs" in flags:
            p.add_argument("--pairs", help="inline pairs, e.g. 0-1,1-2")
            p.add_argument("--pairs-file", help="pairs file, one 'a b' per line")
        if "relation" in flags:
            p.add_argument("--relation", help="relation file ('rel N' + matrix)")
        if "relation!" in flags:
            p.add_argument("--relation", required=True,
                           help="relation file ('rel N' + matrix)")
        if "lift" in flags:
            p.add_argument("--lift", required=True, help="serialized lift file")
        p.add_argument("--out", help="write the artifact here instead of stdout")
        p.add_argument("--cap-n", type=int, default=None,
                       help="override the size cap of this command")
        p.add_argument("--cap-assignments", type=int,
                       default=DEFAULT_ASSIGNMENT_CAP,
                       help="cap on brute-force assignment scans")
        p.add_argument("--seed", type=int, default=0,
                       help="seed for randomized commands (reserved)")
        return p

    add("check", "check identities against an algebra", "algebra", "identities!")
    p = add("linear", "classify identities as linear / balanced linear",
            "identities!")
    p.add_argument("--algebra", help="algebra file supplying the signature")
    p.add_argument("--sig", help="inline signature, e.g. 'm/2,e/0'")
    add("close", "generate the least tolerance containing the pairs",
        "algebra", "pairs")
    add("lift", "build and verify the lifted algebra", "algebra", "pairs",
        "relation", "identities")
    add("verify", "re-verify a serialized lift", "algebra", "relation!", "lift",
        "identities")
    add("complex", "emit the complex algebra", "algebra")
    add("tolerances", "enumerate all tolerances", "algebra")
    return parser


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _emit(text: str, out: str | None) -> bool:
    """Write the artifact; returns True when it went to stdout."""
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        return False
    sys.stdout.write(text)
    return True


def _load_algebra(args) -> FiniteAlgebra:
    return parse_algebra(_read(args.algebra))


def _load_identities(args, sig: Signature) -> IdentitySet:
    if getattr(args, "identities", None):
        return parse_identity_file(_read(args.identities), sig)
    return IdentitySet(sig)


def _load_tolerance(args, alg: FiniteAlgebra) -> Tolerance:
    """--pairs/--pairs-file are closed into a tolerance; --relation files are
    validated strictly and never auto-closed."""
    given = [name for name in ("pairs", "pairs_file", "relation")
             if getattr(args, name, None) is not None]
    if len(given) != 1:
        raise ParseError("give exactly one of --pairs, --pairs-file, --relation")
    if getattr(args, "relation", None) is not None:
        return Tolerance(parse_relation(_read(args.relation)), alg)
    if getattr(args, "pairs_file", None) is not None:
        pairs = parse_pairs_file(_read(args.pairs_file))
    else:
        pairs = parse_pair_spec(args.pairs)
    return tolerance_generated(alg, pairs)


def _print_report(report, to_stderr: bool):
    stream = sys.stderr if to_stderr else sys.stdout
    for line in report.lines():
        print(line, file=stream)


def cmd_check(args) -> int:
    alg = _load_algebra(args)
    ids = parse_identity_file(_read(args.identities), alg.sig)
    reports = satisfies_all(alg, ids, cap=args.cap_assignments)
    for rep in reports:
        print(rep)
    return 0 if all(r.holds for r in reports) else 1


def cmd_linear(args) -> int:
    if args.algebra:
        sig = _load_algebra(args).sig
    elif args.sig:
        sig = Signature.parse(args.sig)
    else:
        raise ParseError("linear needs --algebra or --sig for the signature")
    for ident in parse_identity_file(_read(args.identities), sig):
        kind = ("BALANCED-LINEAR" if is_balanced_linear(ident)
                else "LINEAR" if is_linear(ident) else "NON-LINEAR")
        print(f"{kind}  {ident}")
    return 0


def cmd_close(args) -> int:
    alg = _load_algebra(args)
    tol = _load_tolerance(args, alg)
    _emit(format_relation(tol.rel), args.out)
    return 0


def cmd_lift(args) -> int:
    alg = _load_algebra(args)
    tol = _load_tolerance(args, alg)
    ids = _load_identities(args, alg.sig)
    cap_n = args.cap_n if args.cap_n is not None else DEFAULT_SIZE_CAP
    result = lift(alg, tol, ids, cap_n=cap_n, cap_assignments=args.cap_assignments)
    on_stdout = _emit(write_lift(result), args.out)
    _print_report(result.report, to_stderr=on_stdout)
    return 0 if result.report.ok else 1


def cmd_verify(args) -> int:
    alg = _load_algebra(args)
    tol = Tolerance(parse_relation(_read(args.relation)), alg)
    ids = _load_identities(args, alg.sig)
    claimed = read_lift(_read(args.lift), alg)
    report = verify_lift(alg, tol, claimed, ids, cap=args.cap_assignments)
    _print_report(report, to_stderr=False)
    return 0 if report.ok else 1


def cmd_complex(args) -> int:
    alg = _load_algebra(args)
    cap_n = args.cap_n if args.cap_n is not None else DEFAULT_SIZE_CAP
    c = complex_algebra(alg, cap_n=cap_n)
    header_lines = [f"complex algebra of a size-{alg.size} base",
                    "element i is the nonempty subset with bitmask i+1:"]
    header_lines.extend(f"  {i} = {mask_str(mask)}"
                        for i, mask in enumerate(c.carrier))
    _emit(format_algebra(c.algebra, header="\n".join(header_lines)), args.out)
    return 0


def cmd_tolerances(args) -> int:
    alg = _load_algebra(args)
    cap = args.cap_n if args.cap_n is not None else DEFAULT_ENUMERATION_CAP
    tols = enumerate_tolerances(alg, cap=cap)
    chunks = [f"tolerances {len(tols)}\n"]
    chunks.extend(format_relation(t.rel) for t in tols)
    _emit("".join(chunks), args.out)
    return 0


_HANDLERS = {
    "check": cmd_check,
    "linear": cmd_linear,
    "close": cmd_close,
    "lift": cmd_lift,
    "verify": cmd_verify,
    "complex": cmd_complex,
    "tolerances": cmd_tolerances,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already; normalize anything else
        return 2 if exc.code else 0
    try:
        return _HANDLERS[args.command](args)
    except ToliftError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except LiftInternalError as exc:
        print(f"internal verification failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
