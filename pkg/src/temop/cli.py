"""Command-line front end: ``temop {train,predict,evaluate,synth}``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import data_io
from .errors import (
    CsvFormatError,
    InsufficientDataError,
    InvalidInputError,
    ModelFileError,
    TemopError,
    UndefinedMetricError,
)
from .harness import SplitSpec, evaluate, write_points_csv, write_report_json
from .infer import classify, predict_proba
from .train import DEFAULT_LAG_CAP, DEFAULT_LAMBDA, DEFAULT_M, train

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INSUFFICIENT = 3
EXIT_INVALID = 4
EXIT_IO = 5
EXIT_MODEL_FILE = 6
EXIT_CSV = 7
EXIT_METRIC = 8
EXIT_INTERNAL = 70

# most specific first
_EXIT_CODES = (
    (InsufficientDataError, EXIT_INSUFFICIENT),
    (CsvFormatError, EXIT_CSV),
    (ModelFileError, EXIT_MODEL_FILE),
    (UndefinedMetricError, EXIT_METRIC),
    (InvalidInputError, EXIT_INVALID),
    (OSError, EXIT_IO),
)


def fmt(x: float | None) -> str:
    return "nan" if x is None else f"{x:.9g}"


def _csv_config(args) -> data_io.CsvConfig:
    return data_io.CsvConfig(
        date_column=args.date_column,
        price_column=args.price_column,
        thousands_separator=args.thousands or None,
        decimal_point=args.decimal,
    )


def cmd_train(args) -> int:
    series = data_io.load_csv(args.csv, _csv_config(args))
    model = train(series, m=args.m, lam=args.lam, lag_cap=args.lag_cap)
    data_io.save_model(model, args.model_out)
    print(f"q={model.q}")
    print("lag\tsubsets\tmin_support")
    for lm in model.lag_models:
        print(f"{lm.lag}\t{len(lm.subsets)}\t{lm.min_support}")
    return EXIT_OK


def cmd_predict(args) -> int:
    model = data_io.load_model(args.model)
    if args.history:
        values = data_io.load_csv(args.history, _csv_config(args)).values
    elif args.values:
        try:
            values = [float(v) for v in args.values.split(",") if v.strip()]
        except ValueError:
            raise InvalidInputError(f"--values must be comma-separated numbers: {args.values!r}") from None
    else:
        raise InvalidInputError("predict needs --history or --values")
    result = predict_proba(model, values)
    print(f"p_up={fmt(result.p_up)}")
    print(f"class={classify(result.p_up, args.threshold):+d}")
    if args.verbose:
        print("lag\tplus_trend\tplus_dist\tminus_trend\tminus_dist\tplus\tminus")
        for ls in result.per_lag:
            print("\t".join([str(ls.lag)] + [fmt(v) for v in (
                ls.plus_trend, ls.plus_dist, ls.minus_trend, ls.minus_dist, ls.plus, ls.minus)]))
        print(f"total_plus={fmt(result.total_plus)}")
        print(f"total_minus={fmt(result.total_minus)}")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    series = data_io.load_csv(args.csv, _csv_config(args))
    spec = SplitSpec(
        train_len=args.train_len,
        val_len=args.val_len,
        test_len=args.test_len,
        gap_len=args.gap,
        use_validations=not args.no_validations,
        context_len=max(args.lag_cap, 1),
    )
    report = evaluate(
        series, spec, m=args.m, lam=args.lam, lag_cap=args.lag_cap,
        threshold=args.threshold, rf=args.rf, series_id=Path(args.csv).stem,
    )
    if args.format == "json":
        if args.output:
            write_report_json(report, args.output)
        else:
            print(json.dumps(report.to_dict(), indent=1))
    elif args.format == "csv":
        out = args.output or "points.csv"
        write_points_csv(report.per_point, out)
        print(f"wrote {len(report.per_point)} points to {out}")
    else:
        lines = [
            f"series\tq\tACC\tF1\tAUC\tSR\tPR_AUC",
            "\t".join([report.model_meta["series_id"], str(report.q)]
                      + [fmt(v) for v in (report.acc, report.f1, report.roc_auc, report.sr, report.pr_auc)]),
        ]
        text = "\n".join(lines) + "\n"
        if args.output:
            Path(args.output).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
    return EXIT_OK


def cmd_synth(args) -> int:
    series = data_io.generate_synthetic(args.kind, args.n, args.seed)
    data_io.write_csv(series, args.out)
    print(f"wrote {len(series)} rows to {args.out}")
    return EXIT_OK


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="temop", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    csv_opts = argparse.ArgumentParser(add_help=False)
    csv_opts.add_argument("--date-column", default="Date")
    csv_opts.add_argument("--price-column", default="Price")
    csv_opts.add_argument("--thousands", default=",", help="thousands separator ('' for none)")
    csv_opts.add_argument("--decimal", default=".")

    model_opts = argparse.ArgumentParser(add_help=False)
    model_opts.add_argument("--m", type=_positive_int, default=DEFAULT_M, help="minimum subset support")
    model_opts.add_argument("--lambda", dest="lam", type=float, default=DEFAULT_LAMBDA, help="covariance ridge")
    model_opts.add_argument("--lag-cap", type=_positive_int, default=DEFAULT_LAG_CAP)

    p = sub.add_parser("train", parents=[csv_opts, model_opts], help="fit a model on a price CSV")
    p.add_argument("csv")
    p.add_argument("model_out")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", parents=[csv_opts], help="probability of an up move")
    p.add_argument("model")
    p.add_argument("--history", help="CSV of recent prices")
    p.add_argument("--values", help="comma-separated recent prices, oldest first")
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("-v", "--verbose", action="store_true", help="print per-lag scores")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("evaluate", parents=[csv_opts, model_opts], help="split, train and walk forward")
    p.add_argument("csv")
    p.add_argument("--train-len", type=_positive_int, default=3000)
    p.add_argument("--val-len", type=_positive_int, default=300)
    p.add_argument("--test-len", type=_positive_int, default=300)
    p.add_argument("--gap", type=_positive_int, default=30)
    p.add_argument("--no-validations", action="store_true")
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--rf", type=float, default=0.0)
    p.add_argument("--format", choices=("json", "csv", "table"), default="table")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("synth", help="write a synthetic price CSV")
    p.add_argument("kind", choices=data_io.SYNTHETIC_KINDS)
    p.add_argument("n", type=_positive_int)
    p.add_argument("out")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (TemopError, OSError) as exc:
        for cls, code in _EXIT_CODES:
            if isinstance(exc, cls):
                print(f"temop {args.command}: error: {exc}", file=sys.stderr)
                return code
        print(f"temop {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
