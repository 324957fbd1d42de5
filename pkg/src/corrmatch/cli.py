"""Command-line front end: stats, sample, enforce, pipeline.

Exit codes: 0 success; 2 validation error (bad flags, shapes, files);
3 numerical degeneracy in the data (constant columns, rank deficiency);
4 I/O failure.  All numeric output is full precision, and all output files
are written atomically, so an error never leaves a truncated file behind.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .dataio import CsvSchema, atomic_text_file, read_csv, write_csv
from .errors import (
    ConstantColumn,
    CorrmatchError,
    InvalidInput,
    RankDeficient,
    ZeroNormColumn,
)
from .procrustes import StatTargets, enforce_correlations
from .report import build_report, write_report_json
from .sampler import SamplerConfig, naive_sample
from .stats import feature_stats, pearson_correlation

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERIC = 3
EXIT_IO = 4


def _add_io_flags(parser):
    parser.add_argument("--columns", metavar="A,B,...",
                        help="comma-separated column names to select, in order")
    parser.add_argument("--delimiter", default=",", help="field delimiter (default ,)")
    parser.add_argument("--no-header", action="store_true",
                        help="input has no header row; columns are named c1..cm")


def _schema(args):
    selected = args.columns.split(",") if args.columns else None
    return CsvSchema(
        delimiter=args.delimiter,
        has_header=not args.no_header,
        selected_columns=selected,
    )


def _log(stage):
    print(stage, file=sys.stderr)


def _load_targets(source, original, synthetic):
    if source == "from_original":
        return StatTargets.from_matrix(original)
    if source == "from_synthetic":
        return StatTargets.from_matrix(synthetic)
    with open(source, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    if not isinstance(payload, dict):
        raise InvalidInput(f"{source}: targets file must map column names to objects")
    names = original.names
    extra = set(payload) - set(names)
    missing = [c for c in names if c not in payload]
    if extra or missing:
        raise InvalidInput(
            f"{source}: targets must supply exactly one (mean, variance) pair per "
            f"selected column; missing={sorted(missing)} unexpected={sorted(extra)}"
        )
    try:
        means = [float(payload[c]["mean"]) for c in names]
        variances = [float(payload[c]["variance"]) for c in names]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"{source}: each column needs numeric 'mean' and 'variance' ({exc})")
    return StatTargets(means, variances)


def cmd_stats(args):
    matrix = read_csv(args.input, _schema(args))
    stats = feature_stats(matrix)
    corr = pearson_correlation(matrix)
    print(f"rows={matrix.n} columns={matrix.m}")
    print("name mean variance")
    for j, name in enumerate(matrix.names):
        print(f"{name} {float(stats.means[j])!r} {float(stats.variances[j])!r}")
    print("pearson correlation (rows in column order):")
    for j, name in enumerate(matrix.names):
        row = " ".join(repr(float(v)) for v in corr.entries[j])
        print(f"{name}: {row}")
    if args.report:
        payload = {
            "n": matrix.n,
            "names": list(matrix.names),
            "means": stats.means.tolist(),
            "variances": stats.variances.tolist(),
            "correlation": corr.entries.tolist(),
        }
        with atomic_text_file(args.report) as fh:
            json.dump(payload, fh, indent=2, allow_nan=False)
            fh.write("\n")
    return EXIT_OK


def cmd_sample(args):
    matrix = read_csv(args.input, _schema(args))
    rows = args.rows if args.rows is not None else matrix.n
    config = SamplerConfig(rows=rows, seed=args.seed, mode=args.mode)
    _log(f"sampling {rows} rows ({args.mode}, seed={args.seed})")
    sample = naive_sample(matrix, config)
    write_csv(sample, args.output, CsvSchema(delimiter=args.delimiter))
    _log(f"wrote {args.output}")
    return EXIT_OK


def cmd_enforce(args):
    schema = _schema(args)
    original = read_csv(args.original, schema)
    synthetic = read_csv(args.synthetic, schema)
    targets = _load_targets(args.targets, original, synthetic)
    _log(f"enforcing correlations of {args.original} onto {args.synthetic}")
    result = enforce_correlations(original, synthetic, targets, rel_tol=args.rel_tol)
    write_csv(result.adjusted, args.output, CsvSchema(delimiter=args.delimiter))
    _log(f"wrote {args.output} (rank={result.rank}, unique={result.unique})")
    if args.report:
        report = build_report(original, result.adjusted, start=synthetic)
        write_report_json(report, args.report)
        _log(f"wrote {args.report} (max corr error {report.corr_max_abs_error!r})")
    return EXIT_OK


def cmd_pipeline(args):
    schema = _schema(args)
    original = read_csv(args.original, schema)
    os.makedirs(args.output_dir, exist_ok=True)

    def out(name):
        return os.path.join(args.output_dir, name)

    def targets_for(synthetic):
        return _load_targets(args.targets, original, synthetic)

    _log(f"read {args.original}: {original.n} rows, {original.m} columns")
    config = SamplerConfig(rows=original.n, seed=args.seed, mode=args.mode)
    sample = naive_sample(original, config)
    write_csv(sample, out("sample.csv"), CsvSchema(delimiter=args.delimiter))
    _log("wrote sample.csv (independent per-column resample)")

    enforced_sample = enforce_correlations(
        original, sample, targets_for(sample), rel_tol=args.rel_tol
    ).adjusted
    write_csv(enforced_sample, out("enforced_sample.csv"), CsvSchema(delimiter=args.delimiter))
    _log("wrote enforced_sample.csv (correlations matched to the original)")

    enforced_original = enforce_correlations(
        original, original, targets_for(original), rel_tol=args.rel_tol
    ).adjusted
    write_csv(enforced_original, out("enforced_original.csv"), CsvSchema(delimiter=args.delimiter))
    _log("wrote enforced_original.csv (self-check: transform applied to the original)")

    for name, candidate, start in (
        ("report_sample.json", sample, None),
        ("report_enforced_sample.json", enforced_sample, sample),
        ("report_enforced_original.json", enforced_original, original),
    ):
        report = build_report(original, candidate, start=start)
        write_report_json(report, out(name))
        _log(f"wrote {name} (max corr error {report.corr_max_abs_error!r})")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="corrmatch",
        description="Match the Pearson correlation matrix of a synthetic table "
        "to an original table, moving the synthetic data as little as possible.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="print per-column means/variances and the correlation matrix")
    p.add_argument("input", help="CSV file")
    p.add_argument("--report", metavar="PATH", help="also write the statistics as JSON")
    _add_io_flags(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("sample", help="naive per-column resample of a table")
    p.add_argument("input", help="CSV file to resample")
    p.add_argument("--output", required=True, metavar="PATH", help="where to write the sample")
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    p.add_argument("--mode", choices=["bootstrap", "permutation"], default="bootstrap")
    p.add_argument("--rows", type=int, default=None,
                   help="output row count (default: same as input; permutation requires it)")
    _add_io_flags(p)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("enforce", help="adjust a synthetic table to the original's correlations")
    p.add_argument("original", help="reference CSV")
    p.add_argument("synthetic", help="CSV to adjust (same shape as the reference)")
    p.add_argument("--output", required=True, metavar="PATH", help="where to write the adjusted table")
    p.add_argument("--report", metavar="PATH", help="write a fidelity report JSON")
    p.add_argument("--targets", default="from_original",
                   help="'from_original', 'from_synthetic', or a JSON file mapping "
                        "column -> {mean, variance} (default from_original)")
    p.add_argument("--rel-tol", type=float, default=1e-12,
                   help="relative rank threshold (default 1e-12)")
    _add_io_flags(p)
    p.set_defaults(func=cmd_enforce)

    p = sub.add_parser("pipeline", help="sample, enforce, and report in one shot")
    p.add_argument("original", help="reference CSV")
    p.add_argument("--output-dir", required=True, metavar="DIR",
                   help="directory for sample.csv, enforced_sample.csv, "
                        "enforced_original.csv and the three report JSONs")
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    p.add_argument("--mode", choices=["bootstrap", "permutation"], default="bootstrap")
    p.add_argument("--targets", default="from_synthetic",
                   help="moment targets for the enforced tables: 'from_synthetic' "
                        "keeps each table's own moments (default), 'from_original' "
                        "imposes the original's, or a JSON targets file")
    p.add_argument("--rel-tol", type=float, default=1e-12)
    _add_io_flags(p)
    p.set_defaults(func=cmd_pipeline)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConstantColumn, ZeroNormColumn, RankDeficient) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except CorrmatchError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
