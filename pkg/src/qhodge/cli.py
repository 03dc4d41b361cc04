"""Command-line entry point.

    qhodge verify [--suite NAME]... [--kmax N] [--tol X] [--seed S] [--out PATH]
    qhodge transgress --order {1|2|4} [--structure {I|J|K}] --input PATH --out PATH
    qhodge torsion [--theta a,b,c,d] [--out PATH]
    qhodge lapl-constant [--modes N]

Exit codes: 0 success, 1 failed verification, 2 usage error,
3 violated precondition, 4 numerical failure.

A JSON config file (--config) may provide any of the RunConfig fields;
explicit flags win over the file.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import transgression, zeta
from .fields import FormField
from .suites import RunConfig, SUITES, run_suites

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_PRECONDITION = 3
EXIT_NUMERICAL = 4


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, indent=1, sort_keys=True, default=float)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _parse_theta(text: str):
    parts = [float(v) for v in text.split(",")]
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("theta needs four comma-separated components")
    return tuple(parts)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qhodge", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("--suite", action="append", default=None, help="suite name (repeatable); default: all")
    v.add_argument("--kmax", type=int, default=None)
    v.add_argument("--tol", type=float, default=None)
    v.add_argument("--seed", type=int, default=None)
    v.add_argument("--theta", type=_parse_theta, default=None)
    v.add_argument("--fields", type=int, default=None, help="random fields per property")
    v.add_argument("--config", default=None, help="JSON file with RunConfig defaults")
    v.add_argument("--out", default=None)

    t = sub.add_parser("transgress", help="solve a transgression problem from a form file")
    t.add_argument("--order", type=int, choices=(1, 2, 4), required=True)
    t.add_argument("--structure", choices=("I", "J", "K"), default=None)
    t.add_argument("--input", required=True)
    t.add_argument("--out", required=True)
    t.add_argument("--tol", type=float, default=None)

    z = sub.add_parser("torsion", help="zeta-regularized torsion invariants")
    z.add_argument("--theta", type=_parse_theta, default=(0.0, 0.0, 0.0, 0.0))
    z.add_argument("--out", default=None)

    l = sub.add_parser("lapl-constant", help="measure the quartic-differential constant")
    l.add_argument("--modes", type=int, default=20, help="number of probe modes")
    l.add_argument("--out", default=None)
    return p


def _load_config(path: str | None, args) -> RunConfig:
    base = {}
    if path:
        with open(path, "r", encoding="utf-8") as fh:
            base = json.load(fh)
    merged = {
        "kmax": base.get("kmax", 4),
        "tolerance": base.get("tolerance", 1e-10),
        "seed": base.get("seed", 0),
        "theta": tuple(base.get("theta", (0.0, 0.0, 0.0, 0.0))),
        "suites": tuple(base.get("suites", ())),
        "out": base.get("out"),
        "field_count": base.get("field_count", 20),
    }
    if args.kmax is not None:
        merged["kmax"] = args.kmax
    if args.tol is not None:
        merged["tolerance"] = args.tol
    if args.seed is not None:
        merged["seed"] = args.seed
    if args.theta is not None:
        merged["theta"] = args.theta
    if args.suite:
        merged["suites"] = tuple(args.suite)
    if args.fields is not None:
        merged["field_count"] = args.fields
    if args.out is not None:
        merged["out"] = args.out
    return RunConfig(**merged)


def cmd_verify(args) -> int:
    try:
        cfg = _load_config(args.config, args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    unknown = [s for s in cfg.suites if s not in SUITES]
    if unknown:
        print(f"error: unknown suite(s): {', '.join(unknown)}; "
              f"known: {', '.join(SUITES)}", file=sys.stderr)
        return EXIT_USAGE
    try:
        report = run_suites(cfg)
    except (zeta.QuadratureFailure, zeta.MethodDisagreement, zeta.TruncationInsufficient,
            transgression.InconsistentConstant) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    _emit(report, cfg.out)
    if not report["all_pass"]:
        print(f"FAILED: {report['first_failure']} exceeds tolerance {cfg.tolerance}",
              file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_transgress(args) -> int:
    if args.order == 2 and args.structure is None:
        print("error: --order 2 requires --structure {I|J|K}", file=sys.stderr)
        return EXIT_USAGE
    try:
        target = FormField.load(args.input)
    except (OSError, KeyError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: cannot read form file: {exc}", file=sys.stderr)
        return EXIT_USAGE
    tol = args.tol if args.tol is not None else {1: 1e-9, 2: 1e-9, 4: 1e-8}[args.order]
    try:
        if args.order == 1:
            result = transgression.transgress1(target, tol=tol)
        elif args.order == 2:
            result = transgression.transgress2(target, args.structure, tol=tol)
        else:
            result = transgression.transgress4(target, tol=tol)
    except transgression.TransgressionError as exc:
        print(f"precondition violated: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    _emit(result.to_dict(), args.out)
    if result.residual > tol:
        print(f"numerical failure: residual {result.residual:.3e} > {tol}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_torsion(args) -> int:
    try:
        report = zeta.torsion_report(args.theta)
    except (zeta.QuadratureFailure, zeta.MethodDisagreement) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    _emit(report, args.out)
    return EXIT_OK


def _probe_modes(count: int):
    """Deterministic enumeration of nonzero modes by increasing |k|^2."""
    r = np.arange(-3, 4)
    ks = np.stack(np.meshgrid(r, r, r, r, indexing="ij"), axis=-1).reshape(-1, 4)
    n2 = (ks**2).sum(axis=1)
    order = np.lexsort((ks[:, 3], ks[:, 2], ks[:, 1], ks[:, 0], n2))
    ks = ks[order]
    ks = ks[(ks != 0).any(axis=1)]
    return [tuple(int(v) for v in k) for k in ks[:count]]


def cmd_lapl_constant(args) -> int:
    modes = _probe_modes(args.modes)
    try:
        constant, report = transgression.measure_lapl_constant(modes)
    except transgression.InconsistentConstant as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    _emit(report, args.out)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_USAGE
    handlers = {
        "verify": cmd_verify,
        "transgress": cmd_transgress,
        "torsion": cmd_torsion,
        "lapl-constant": cmd_lapl_constant,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
