"""Command-line interface: ``jelsym test | simulate | calibrate``.

Exit codes: 0 success (whatever the decision), 2 input or configuration
error, 3 solver convergence failure.
"""

import argparse
import csv
import json
import sys

import numpy as np

from .exceptions import ConvergenceError, JelSymError
from .study import covariance_check, load_config, null_calibration, run_study
from .symmetry import TestConfig, jel_symmetry_test

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CONVERGENCE = 3


class CsvError(JelSymError):
    pass


def read_csv(path, header=False):
    """Numeric CSV, one observation per row; errors name the row and column."""
    rows = []
    width = None
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        for lineno, row in enumerate(reader, start=1):
            if header and lineno == 1:
                continue
            if not row or all(not cell.strip() for cell in row):
                continue
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise CsvError(f"{path}: row {lineno} has {len(row)} columns, expected {width}")
            values = []
            for col, cell in enumerate(row, start=1):
                try:
                    values.append(float(cell))
                except ValueError:
                    raise CsvError(
                        f"{path}: row {lineno}, column {col}: non-numeric cell {cell!r}"
                    ) from None
            rows.append(values)
    if not rows:
        raise CsvError(f"{path}: no data rows")
    return np.array(rows, dtype=float)


def _parse_center(text):
    if text is None or text.strip().upper() == "ZERO":
        return None
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise CsvError(f"bad --center value {text!r}") from None


def _cmd_test(args):
    X = read_csv(args.csv, header=args.header)
    config = TestConfig(alpha=args.alpha, center=_parse_center(args.center),
                        split_policy=args.split, n1_override=args.n1)
    result = jel_symmetry_test(X, config)
    print(f"statistic: {result.statistic!r}")
    print(f"p-value:   {result.p_value!r}")
    print(f"reject:    {result.reject} (alpha={result.alpha})")
    print(f"theta:     {result.theta_hat!r}")
    print(f"n1, n2:    {result.n1}, {result.n2} (split={result.split})")
    print(f"outcome:   {result.outcome_flag.value}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(result.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
    return EXIT_OK


def _write_json(path, payload):
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _cmd_simulate(args):
    config = load_config(args.config)
    if args.workers:
        config = config.with_(workers=args.workers)
    report = run_study(config)
    print(report.format_table())
    print(f"replications: {report.replications}  wall time: {report.wall_time:.1f}s")
    if args.out:
        _write_json(args.out, report.to_dict(include_statistics=args.dump_statistics))
    return EXIT_OK


def _cmd_calibrate(args):
    config = load_config(args.config)
    cal = null_calibration(config)
    print(f"KS distance to chi2_1: {cal.ks_distance:.4f}")
    for q, v in cal.quantiles.items():
        print(f"quantile {q:.2f}: {v:.4f}")
    if args.covariance:
        cc = covariance_check(config)
        print(f"corr(U1, U2): {cc.correlation:.4f} (se {cc.standard_error:.4f})")
    if args.out:
        _write_json(args.out, cal.to_dict())
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="jelsym", description="Jackknife empirical likelihood test of diagonal symmetry")
    sub = parser.add_subparsers(dest="command", required=True)

    t = sub.add_parser("test", help="test one CSV sample for symmetry")
    t.add_argument("csv")
    t.add_argument("--alpha", type=float, default=0.05)
    t.add_argument("--center", default=None, help="ZERO or comma-separated coordinates")
    t.add_argument("--split", default="first", help="'first' or 'random:SEED'")
    t.add_argument("--n1", type=int, default=None)
    t.add_argument("--json", default=None, metavar="PATH")
    t.add_argument("--header", action="store_true", help="skip the first CSV row")
    t.set_defaults(func=_cmd_test)

    s = sub.add_parser("simulate", help="run a Monte Carlo size/power study")
    s.add_argument("config")
    s.add_argument("--out", default=None, metavar="PATH")
    s.add_argument("--workers", type=int, default=None)
    s.add_argument("--dump-statistics", action="store_true")
    s.set_defaults(func=_cmd_simulate)

    c = sub.add_parser("calibrate", help="compare the null statistic with chi2_1")
    c.add_argument("config")
    c.add_argument("--out", default=None, metavar="PATH")
    c.add_argument("--covariance", action="store_true", help="also report corr(U1, U2)")
    c.set_defaults(func=_cmd_calibrate)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.func(args)
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (JelSymError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
