"""Command line front end.

Exit codes: 0 all checks passed, 1 at least one check failed, 2 usage or
configuration problem, 3 unexpected internal error.
"""
from __future__ import annotations

import argparse
import sys

from . import catalog as catalog_mod
from . import harness
from .errors import ConfigError, InsufficientData, UnknownProblem, VerifierError
from .report import Report, dump_json
from .separation import separation_report
from .encoding import PolylogBound, parse_bound

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=None,
                        help="master seed (default 42)")
    parser.add_argument("--config", default=None,
                        help="path to a key = value config file")
    parser.add_argument("--json", default=None, metavar="PATH",
                        help="also write the report as JSON ('-' for stdout)")
    parser.add_argument("--max-exhaustive", type=int, default=None,
                        help="node-count cap for exhaustive graph sweeps")
    parser.add_argument("--random", type=int, default=None, dest="random_budget",
                        help="number of random samples per check")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polytract",
        description="finite-scale checks for digest preprocessing, "
                    "constant-redundancy factorizations, and reductions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-factorization",
                       help="check split sizes, restore, and query growth")
    p.add_argument("name", help="catalog name, e.g. qbds-absorb")
    _add_common(p)

    p = sub.add_parser("verify-witness",
                       help="check a preprocessing witness on labeled samples")
    p.add_argument("name", help="catalog name, e.g. wordstats-count-digest")
    _add_common(p)

    p = sub.add_parser("verify-reduction",
                       help="check membership agreement along a reduction")
    p.add_argument("name", help="catalog name, e.g. qbds-to-bds")
    _add_common(p)

    p = sub.add_parser("separate",
                       help="tabulate visit orders against digest capacity")
    p.add_argument("--max-n", type=int, default=20)
    p.add_argument("--bound", type=parse_bound, default=None, metavar="A,K,B",
                   help="digest bit bound a*log2(n)^k + b (default 1,2,0)")
    p.add_argument("--csv", action="store_true", help="emit the table as CSV")
    _add_common(p)

    p = sub.add_parser("bench",
                       help="fit preprocessing and query latency growth")
    _add_common(p)

    p = sub.add_parser("run-suite", help="run every registered check")
    _add_common(p)

    p = sub.add_parser("list", help="list catalog entries")
    _add_common(p)
    return parser


def _config_from_args(args) -> harness.SuiteConfig:
    overrides = {
        "seed": getattr(args, "seed", None),
        "random_budget": getattr(args, "random_budget", None),
    }
    cfg = harness.load_config(getattr(args, "config", None), overrides)
    if getattr(args, "max_exhaustive", None) is not None:
        cfg.exhaustive_caps["bds"] = args.max_exhaustive
        cfg.exhaustive_caps["qbds"] = args.max_exhaustive
    return cfg


def _emit(report: Report | harness.SuiteReport, args) -> int:
    if isinstance(report, harness.SuiteReport):
        lines = []
        for sub_report in report.reports:
            lines.extend(sub_report.summary_lines())
        verdict = report.verdict
        payload = report.to_dict()
    else:
        lines = report.summary_lines()
        verdict = report.passed
        payload = report.to_dict()
    for line in lines:
        print(line)
    print(f"overall: {'PASS' if verdict else 'FAIL'}")
    if args.json == "-":
        print(dump_json(payload))
    elif args.json:
        dump_json(payload, args.json)
    return EXIT_PASS if verdict else EXIT_FAIL


def _cmd_verify_factorization(args) -> int:
    cfg = _config_from_args(args)
    cat = catalog_mod.build_catalog(cfg)
    return _emit(harness.run_factorization_check(cat, cfg, args.name), args)


def _cmd_verify_witness(args) -> int:
    cfg = _config_from_args(args)
    cat = catalog_mod.build_catalog(cfg)
    return _emit(harness.run_witness_check(cat, cfg, args.name), args)


def _cmd_verify_reduction(args) -> int:
    cfg = _config_from_args(args)
    cat = catalog_mod.build_catalog(cfg)
    return _emit(harness.run_reduction_check(cat, cfg, args.name), args)


def _cmd_separate(args) -> int:
    cfg = _config_from_args(args)
    bound = args.bound or cfg.bounds.get("separation", PolylogBound(1.0, 2, 0.0))
    cap = cfg.exhaustive_caps.get("separation", 5)
    sep = separation_report(range(1, args.max_n + 1), bound, enumerate_max=cap)
    if args.csv:
        for line in sep.csv_lines():
            print(line)
    else:
        for row in sep.rows:
            realizable = row["realizable"]
            shown = "-" if realizable is None else str(realizable)
            print(f"n={row['n']:>3}  orders={row['factorial']:>20}  "
                  f"2^n={row['two_pow_n']:>8}  digest_values<=2^{row['bound_bits']}"
                  f"  realizable={shown}")
        if sep.collision:
            col = sep.collision
            print(f"collision: two numberings share the first {col.bits} "
                  f"digest bits at n={len(col.first.numbering)}")
    if args.json == "-":
        print(dump_json(sep.to_dict()))
    elif args.json:
        dump_json(sep.to_dict(), args.json)
    ok = sep.factorial_beats_power_from_4
    print(f"overall: {'PASS' if ok else 'FAIL'}")
    return EXIT_PASS if ok else EXIT_FAIL


def _cmd_bench(args) -> int:
    cfg = _config_from_args(args)
    cat = catalog_mod.build_catalog(cfg)
    return _emit(harness.run_fit_checks(cat, cfg), args)


def _cmd_run_suite(args) -> int:
    cfg = _config_from_args(args)
    suite = harness.run_suite(cfg)
    if cfg.output_path and not args.json:
        suite.to_json(cfg.output_path)
    return _emit(suite, args)


def _cmd_list(args) -> int:
    cfg = _config_from_args(args)
    cat = catalog_mod.build_catalog(cfg)
    print("problems:")
    for name in sorted(cat.problems):
        print(f"  {name}: {cat.problems[name].describe}")
    print("factored languages:", ", ".join(sorted(cat.factored)))
    print("witnesses:", ", ".join(sorted(cat.witnesses)))
    print("reductions:", ", ".join(
        sorted(list(cat.fcr_reductions) + list(cat.f_reductions))))
    return EXIT_PASS


_COMMANDS = {
    "verify-factorization": _cmd_verify_factorization,
    "verify-witness": _cmd_verify_witness,
    "verify-reduction": _cmd_verify_reduction,
    "separate": _cmd_separate,
    "bench": _cmd_bench,
    "run-suite": _cmd_run_suite,
    "list": _cmd_list,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_PASS
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, UnknownProblem, InsufficientData) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except VerifierError as exc:
        print(f"check aborted: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except Exception as exc:  # pragma: no cover - safety net
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
