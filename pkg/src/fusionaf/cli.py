"""Command line interface.

Exit codes: 0 success / Z-stable, 10 inconclusive, 1 validation failure, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .document import DocumentError, emit, parse
from .fusion import StructureError, verify_ring
from .module import indecomposable, verify_action
from .multimatrix import brute_force_commutant, inclusion_between_levels, relative_commutant_shape
from .registry import ACTIONS, registry_document
from .stability import Options, analyze, d_stability_note, parse_d

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2
EXIT_INCONCLUSIVE = 10


class UsageError(Exception):
    pass


def _load(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    doc = parse(text)
    return doc, doc.to_action()


def _invalid(path: str, exc: Exception) -> str:
    if isinstance(exc, DocumentError):
        return "\n".join(f"{path}: {issue}" for issue in exc.issues)
    return f"{path}: {exc}"


def cmd_check(args) -> int:
    status = EXIT_OK
    for path in args.files:
        try:
            doc, action = _load(path)
        except (DocumentError, StructureError) as exc:
            print(_invalid(path, exc))
            status = EXIT_INVALID
            continue
        problems = [f"ring: {v}" for v in verify_ring(action.ring)]
        problems += [f"dual_ring: {v}" for v in verify_ring(action.dual_ring)]
        problems += [f"action: {v}" for v in verify_action(action)]
        ind = indecomposable(action.module)
        if not ind:
            problems.append(f"module: decomposable, partition {[list(p) for p in ind.partition]}")
        if problems:
            status = EXIT_INVALID
            print(f"{path}: FAIL")
            for p in problems:
                print(f"  {p}")
        else:
            print(f"{path}: ok")
    return status


def _horizon(args) -> int | None:
    if args.horizon is not None:
        return args.horizon
    env = os.environ.get("FUSIONAF_HORIZON")
    if env:
        try:
            value = int(env)
        except ValueError:
            raise UsageError(f"FUSIONAF_HORIZON must be an integer, got {env!r}") from None
        if value < 1:
            raise UsageError("FUSIONAF_HORIZON must be at least 1")
        return value
    return None


def _analyze_one(path: str, horizon: int | None, args):
    try:
        doc, action = _load(path)
    except (DocumentError, StructureError) as exc:
        return None, _invalid(path, exc)
    name = doc.name or Path(path).stem
    report = analyze(action, horizon, Options(max_m=args.max_m), name=name)
    for D in args.d or ():
        report = d_stability_note(report, D)
    return report, None


def cmd_analyze(args) -> int:
    horizon = _horizon(args)
    if len(args.files) > 1 and (args.report or args.json):
        raise UsageError("--report/--json take a single input file")
    for D in args.d or ():
        try:
            parse_d(D)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    with ThreadPoolExecutor() as pool:
        results = list(pool.map(lambda p: _analyze_one(p, horizon, args), args.files))
    codes = []
    for report, error in results:
        if error is not None:
            print(error)
            codes.append(EXIT_INVALID)
            continue
        text = report.to_markdown()
        sys.stdout.write(text)
        if args.report:
            Path(args.report).write_text(text, encoding="utf-8")
        if args.json:
            Path(args.json).write_text(report.to_json(), encoding="utf-8")
        if not report.valid:
            codes.append(EXIT_INVALID)
        else:
            codes.append(EXIT_OK if report.z_stable else EXIT_INCONCLUSIVE)
    if EXIT_INVALID in codes:
        return EXIT_INVALID
    return max(codes) if codes else EXIT_OK


def cmd_examples(args) -> int:
    if args.action == "list":
        for name, (desc, _) in sorted(ACTIONS.items()):
            print(f"{name:24} {desc}")
        return EXIT_OK
    if args.name not in ACTIONS:
        raise UsageError(f"unknown example {args.name!r}; see 'examples list'")
    Path(args.path).write_text(emit(registry_document(args.name)), encoding="utf-8")
    return EXIT_OK


def cmd_oracle(args) -> int:
    try:
        _, action = _load(args.file)
    except (DocumentError, StructureError) as exc:
        print(_invalid(args.file, exc))
        return EXIT_INVALID
    inc = inclusion_between_levels(action, args.n, args.m)
    formula = relative_commutant_shape(inc).dimension
    print(f"formula dimension: {formula}")
    try:
        brute = brute_force_commutant(inc)
    except ValueError as exc:
        print(f"brute-force dimension: refused ({exc})")
        return EXIT_OK
    print(f"brute-force dimension: {brute}")
    return EXIT_OK if brute == formula else EXIT_INVALID


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fusionaf", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="validate input documents")
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("analyze", help="run the Z-stability pipeline")
    p.add_argument("files", nargs="+")
    p.add_argument("--horizon", type=int)
    p.add_argument("--max-m", type=int, default=4)
    p.add_argument("--report", help="write the markdown report here")
    p.add_argument("--json", help="write the machine-readable report here")
    p.add_argument("--d", action="append", help="also note D-stability for D (Z, M_{q^inf}, O_2, O_inf)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("examples", help="built-in examples")
    esub = p.add_subparsers(dest="action", required=True)
    esub.add_parser("list")
    e = esub.add_parser("emit")
    e.add_argument("name")
    e.add_argument("path")
    p.set_defaults(func=cmd_examples)

    p = sub.add_parser("oracle", help="test aids")
    osub = p.add_subparsers(dest="oracle", required=True)
    o = osub.add_parser("commutant")
    o.add_argument("file")
    o.add_argument("--n", type=int, required=True)
    o.add_argument("--m", type=int, required=True)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "horizon", None) is not None and args.horizon < 1:
        print("error: --horizon must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    if getattr(args, "max_m", 0) < 0:
        print("error: --max-m must be nonnegative", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
