"""Command-line interface: detect, evaluate and sweep.

Every artifact file starts with the fully resolved configuration
(flags, defaults and seed), so any output can be regenerated from its
own header.  Files are written atomically (temp file + rename) and the
process exits 0 only when the artifact was completely written.

Exit codes:
    0  success
    2  configuration error (also used by argparse for usage errors)
    3  input file could not be parsed
    4  metric undefined for the input (e.g. single-class labels)
    5  I/O failure
    1  unexpected internal error
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from pathlib import Path
from typing import Any

from .dataset import parse_labeled_file, parse_raw_series, window_series, znormalize
from .errors import ConfigurationError, InputFormatError, MetricError
from .evaluation import ExperimentConfig, run_experiment, sweep
from .forest import fit, score

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INPUT = 3
EXIT_METRIC = 4
EXIT_IO = 5

_DELIMITER_NAMES = {"comma": ",", "tab": "\t", "\\t": "\t"}


def _resolve_delimiter(raw: str | None) -> str | None:
    if raw is None:
        return None
    return _DELIMITER_NAMES.get(raw, raw)


def _add_io_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--input", required=True, help="input data file")
    parser.add_argument(
        "--delimiter",
        default=None,
        help="field separator: a single character, 'comma' or 'tab' "
        "(default: auto-detect between comma and tab)",
    )
    parser.add_argument("--output", required=True, help="artifact file to write")
    parser.add_argument(
        "--format", choices=("csv", "json"), default="csv", help="artifact format"
    )


def _add_model_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--trees", type=int, default=10, metavar="M", help="ensemble size")
    parser.add_argument(
        "--hashes", type=int, default=10, metavar="H", help="hash functions per leaf"
    )
    parser.add_argument(
        "--slimit", type=int, default=3, help="leaf length threshold for tree growth"
    )
    parser.add_argument(
        "--hlimit",
        type=int,
        default=None,
        help="tree depth cap (default: floor(log2(d)))",
    )
    parser.add_argument("--seed", type=int, default=0, help="base random seed")
    parser.add_argument(
        "--normalize",
        action="store_true",
        help="z-normalize each subsequence before fitting",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dlde",
        description="Anomaly subsequence detection via random time-split tree "
        "ensembles and dynamic local density estimation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_detect = sub.add_parser(
        "detect", help="score every subsequence of a dataset or windowed raw series"
    )
    _add_io_flags(p_detect)
    _add_model_flags(p_detect)
    p_detect.add_argument(
        "--subseq-len",
        type=int,
        default=None,
        metavar="S",
        help="treat the input as one raw series and cut it into windows of "
        "length S (default: input is a label-first dataset)",
    )
    p_detect.add_argument(
        "--anomaly-class",
        type=float,
        default=None,
        help="label value marking anomalies (labeled mode; informational only "
        "for detect)",
    )
    p_detect.set_defaults(handler=_run_detect)

    p_eval = sub.add_parser(
        "evaluate", help="repeated-run AUC protocol against ground-truth labels"
    )
    _add_io_flags(p_eval)
    _add_model_flags(p_eval)
    p_eval.add_argument(
        "--anomaly-class",
        type=float,
        required=True,
        help="label value marking anomalies",
    )
    p_eval.add_argument(
        "--repeats", type=int, default=50, help="number of seeded fit/score runs"
    )
    p_eval.add_argument(
        "--timing",
        action="store_true",
        help="include per-run wall-clock seconds in the artifact (makes the "
        "output non-reproducible byte-for-byte)",
    )
    p_eval.set_defaults(handler=_run_evaluate)

    p_sweep = sub.add_parser(
        "sweep", help="evaluate repeatedly while varying the tree or hash count"
    )
    _add_io_flags(p_sweep)
    _add_model_flags(p_sweep)
    p_sweep.add_argument(
        "--anomaly-class",
        type=float,
        required=True,
        help="label value marking anomalies",
    )
    p_sweep.add_argument(
        "--repeats", type=int, default=50, help="runs per parameter value"
    )
    p_sweep.add_argument(
        "--param", choices=("m", "h"), required=True, help="parameter to vary"
    )
    p_sweep.add_argument(
        "--values",
        required=True,
        help="comma-separated list of parameter values, e.g. 1,5,10,25",
    )
    p_sweep.set_defaults(handler=_run_sweep)

    return parser


def _config_echo(args: argparse.Namespace, extra: dict[str, Any]) -> dict[str, Any]:
    echo: dict[str, Any] = {
        "command": args.command,
        "input": args.input,
        "delimiter": args.delimiter,
        "trees": args.trees,
        "hashes": args.hashes,
        "slimit": args.slimit,
        "hlimit": args.hlimit,
        "seed": args.seed,
        "normalize": args.normalize,
        "format": args.format,
    }
    echo.update(extra)
    return echo


def _format_cell(value: Any) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _render(config: dict[str, Any], columns: list[str], rows: list[dict[str, Any]],
            fmt: str) -> str:
    if fmt == "json":
        return json.dumps({"config": config, "rows": rows}, indent=2) + "\n"
    buf = io.StringIO()
    buf.write("# config: " + json.dumps(config) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_format_cell(row[c]) for c in columns])
    return buf.getvalue()


def _write_atomic(path: str, text: str) -> None:
    target = Path(path)
    fd, tmp = tempfile.mkstemp(
        dir=str(target.parent) or ".", prefix=target.name + ".", suffix=".tmp"
    )
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _load_detect_dataset(args: argparse.Namespace):
    delimiter = _resolve_delimiter(args.delimiter)
    if args.subseq_len is not None:
        series = parse_raw_series(args.input, delimiter=delimiter)
        dataset = window_series(series, args.subseq_len)
    else:
        dataset = parse_labeled_file(
            args.input, anomaly_class=args.anomaly_class, delimiter=delimiter
        )
    if args.normalize:
        dataset = znormalize(dataset)
    return dataset


def _run_detect(args: argparse.Namespace) -> None:
    dataset = _load_detect_dataset(args)
    forest = fit(
        dataset,
        m=args.trees,
        h=args.hashes,
        slimit=args.slimit,
        hlimit=args.hlimit,
        seed=args.seed,
    )
    result = score(forest, dataset)
    config = _config_echo(
        args,
        {
            "anomaly_class": args.anomaly_class,
            "subseq_len": args.subseq_len,
            "hlimit_resolved": forest.params.hlimit,
            "n": dataset.n,
            "d": dataset.d,
        },
    )
    rows = [
        {
            "index": k,
            "score": float(result.scores[k]),
            "anomaly_score": float(result.anomaly_scores[k]),
        }
        for k in range(dataset.n)
    ]
    _write_atomic(args.output, _render(config, ["index", "score", "anomaly_score"], rows, args.format))


def _experiment_config(args: argparse.Namespace) -> ExperimentConfig:
    return ExperimentConfig(
        dataset_path=args.input,
        anomaly_class=args.anomaly_class,
        delimiter=_resolve_delimiter(args.delimiter),
        m=args.trees,
        h=args.hashes,
        slimit=args.slimit,
        hlimit=args.hlimit,
        repeats=args.repeats,
        base_seed=args.seed,
        normalize=args.normalize,
    )


def _run_evaluate(args: argparse.Namespace) -> None:
    report = run_experiment(_experiment_config(args))
    config = _config_echo(
        args,
        {
            "anomaly_class": args.anomaly_class,
            "repeats": args.repeats,
            "timing": args.timing,
            "n": report.config["n"],
            "d": report.config["d"],
            "mean_auc": report.mean_auc,
            "std_auc": report.std_auc,
        },
    )
    columns = ["run", "seed", "auc"] + (["seconds"] if args.timing else [])
    rows = report.rows(include_seconds=args.timing)
    _write_atomic(args.output, _render(config, columns, rows, args.format))
    print(
        f"evaluate: {args.repeats} runs, mean AUC {report.mean_auc:.4f} "
        f"(std {report.std_auc:.4f}), total {sum(report.seconds):.1f}s",
        file=sys.stderr,
    )


def _parse_values(raw: str) -> list[int]:
    try:
        return [int(part) for part in raw.split(",") if part.strip() != ""]
    except ValueError:
        raise ConfigurationError(f"--values must be comma-separated integers, got {raw!r}") from None


def _run_sweep(args: argparse.Namespace) -> None:
    values = _parse_values(args.values)
    reports = sweep(_experiment_config(args), args.param, values)
    config = _config_echo(
        args,
        {
            "anomaly_class": args.anomaly_class,
            "repeats": args.repeats,
            "param": args.param,
            "values": values,
        },
    )
    rows = [
        {
            "param": args.param,
            "value": v,
            "mean_auc": r.mean_auc,
            "std_auc": r.std_auc,
            "repeats": args.repeats,
        }
        for v, r in zip(values, reports)
    ]
    _write_atomic(
        args.output,
        _render(config, ["param", "value", "mean_auc", "std_auc", "repeats"], rows, args.format),
    )


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.handler(args)
    except InputFormatError as exc:
        print(f"dlde: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConfigurationError as exc:
        print(f"dlde: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except MetricError as exc:
        print(f"dlde: metric error: {exc}", file=sys.stderr)
        return EXIT_METRIC
    except OSError as exc:
        print(f"dlde: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
