"""Command line: fit, predict, bench, and report subcommands.

`fit` trains a rule base on a dataset and writes the run's artifacts to
an output directory: `model.rules`, `loss.csv`, `predictions.csv`,
`summary.md`, and `manifest.json`.  `predict` applies a saved model to a
dataset.  `bench` times both training schemes under the same budget.
`report` renders figures from a run directory's CSV files.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import platform
import sys
from pathlib import Path

import numpy as np

from .bench import bench_rows, format_bench_markdown, run_bench
from .dataset import (
    BUILTIN_DATASETS,
    ConstantColumnError,
    DataFormatError,
    Dataset,
    build_grid_rulebase,
    load_builtin,
    load_csv,
    normalize_inputs,
    partitions_from_dataset,
)
from .errors import InferenceError
from .learning import (
    METHODS,
    TrainConfig,
    _safe_accuracy,
    predict_batch,
    train_production,
    train_sugeno,
)
from .rulebase import GAUSSIAN, TRIANGULAR, RuleFormatError, load_rulebase, save_rulebase

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3


class UsageError(Exception):
    """Bad command line or option combination (exit code 1)."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad arguments; route through the
    # usage-error path (exit 1) instead.
    def error(self, message):
        raise UsageError(message)


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {value}")
    return value


def _unit_float(text: str) -> float:
    value = float(text)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"must be in [0, 1], got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="fuzzident",
        description="Fuzzy rule-base identification: train, predict, benchmark, report.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add_common(p, *, dataset=True):
        if dataset:
            p.add_argument(
                "--dataset", required=True,
                help=f"built-in name ({', '.join(BUILTIN_DATASETS)}) or CSV path "
                     "(last column is the target)",
            )
        p.add_argument("--out", default="fuzzident-run", metavar="DIR",
                       help="run directory for artifacts (default: %(default)s)")

    fit = sub.add_parser("fit", help="train a rule base and write run artifacts")
    add_common(fit)
    fit.add_argument("--method", choices=METHODS, default="production",
                     help="training scheme (default: %(default)s; "
                          "type-distance has no trainable parameters)")
    fit.add_argument("--iterations", type=_positive_int, default=32760,
                     help="gradient steps (default: %(default)s)")
    fit.add_argument("--eta", type=_positive_float, default=0.01,
                     help="learning rate (default: %(default)s)")
    fit.add_argument("--d0", type=_unit_float, default=0.0,
                     help="rule activation threshold for the production scheme "
                          "(default: %(default)s)")
    fit.add_argument("--seed", type=int, default=0,
                     help="seed for any randomized ordering (default: %(default)s)")
    fit.add_argument("--sets", type=_positive_int, default=None,
                     help="fuzzy sets per input (default: 6 for up to two inputs, "
                          "3 otherwise)")
    fit.add_argument("--fallback-all-rules", action="store_true",
                     help="when evaluating, retry rows that activate no rule with "
                          "the threshold dropped to 0")
    fit.set_defaults(func=cmd_fit)

    predict = sub.add_parser("predict", help="apply a saved model to a dataset")
    add_common(predict)
    predict.add_argument("--method", choices=METHODS, default=None,
                         help="inference scheme (default: by model kind — "
                              "production for triangular, sugeno for gaussian)")
    predict.add_argument("--d0", type=_unit_float, default=0.0,
                         help="rule activation threshold for the production scheme "
                              "(default: %(default)s)")
    predict.add_argument("--fallback-all-rules", action="store_true",
                         help="retry rows that activate no rule with the threshold "
                              "dropped to 0")
    predict.set_defaults(func=cmd_predict)

    bench = sub.add_parser("bench", help="time both training schemes, same budget")
    add_common(bench)
    bench.add_argument("--iterations", type=_positive_int, default=32760,
                       help="gradient steps per repetition (default: %(default)s)")
    bench.add_argument("--eta", type=_positive_float, default=0.01,
                       help="learning rate for both schemes (default: %(default)s)")
    bench.add_argument("--d0", type=_unit_float, default=0.0,
                       help="activation threshold for the production arm "
                            "(default: %(default)s)")
    bench.add_argument("--seed", type=int, default=0,
                       help="seed shared by both arms (default: %(default)s)")
    bench.add_argument("--sets", type=_positive_int, default=None,
                       help="fuzzy sets per input (default: 6 for up to two inputs, "
                            "3 otherwise)")
    bench.set_defaults(func=cmd_bench)

    report = sub.add_parser("report", help="render figures from a run directory")
    add_common(report, dataset=False)
    report.set_defaults(func=cmd_report)

    return parser


def _load_dataset(name_or_path: str) -> Dataset:
    if name_or_path in BUILTIN_DATASETS:
        return load_builtin(name_or_path)
    return load_csv(name_or_path)


def _default_sets(requested: int | None, input_dim: int) -> int:
    if requested is not None:
        return requested
    return 6 if input_dim <= 2 else 3


def _hardware_note() -> str:
    return (
        f"{platform.system()} {platform.machine()}, Python {platform.python_version()}"
    )


def _fmt(x: float) -> str:
    return repr(float(x))


def _write_loss_csv(path: Path, curve) -> None:
    lines = ["iteration,loss,elapsed_seconds"]
    lines += [f"{t},{_fmt(l)},{_fmt(s)}" for t, l, s in curve]
    path.write_text("\n".join(lines) + "\n")


def _write_predictions_csv(path: Path, targets, predictions) -> None:
    lines = ["row,target,prediction,relative_error"]
    for k, (t, p) in enumerate(zip(targets, predictions), start=1):
        rel = abs(p - t) / abs(t) if t != 0 else float("nan")
        lines.append(f"{k},{_fmt(t)},{_fmt(p)},{_fmt(rel)}")
    path.write_text("\n".join(lines) + "\n")


def _accuracy_text(value: float) -> str:
    return "n/a (zero target present)" if np.isnan(value) else f"{value:.2f}"


def cmd_fit(args) -> int:
    if args.method == "type-distance":
        raise UsageError(
            "fit trains production or sugeno rule bases; the type-distance "
            "scheme has no trainable parameters"
        )
    raw = _load_dataset(args.dataset)
    norm, transforms = normalize_inputs(raw)
    sets = _default_sets(args.sets, norm.input_dim)
    parts = partitions_from_dataset(norm, sets)
    kind = TRIANGULAR if args.method == "production" else GAUSSIAN
    rb = build_grid_rulebase(parts, kind).with_input_transforms(
        [(t.scale, t.offset) for t in transforms]
    )
    cfg = TrainConfig(
        iterations=args.iterations, eta=args.eta, threshold=args.d0, seed=args.seed
    )
    trainer = train_production if args.method == "production" else train_sugeno
    result = trainer(rb, norm, cfg)
    if args.method == "production":
        # The report inside the trainer always falls back so its accuracy
        # is computable; here the flag decides whether a row with no
        # active rule fails the run or is retried at threshold 0.
        predictions, fallbacks = predict_batch(
            result.rulebase, norm.inputs, method="production",
            threshold=args.d0, fallback_all_rules=args.fallback_all_rules,
        )
        acc_value = _safe_accuracy(raw.targets, predictions)
    else:
        predictions, fallbacks = result.predictions, 0
        acc_value = result.accuracy

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    save_rulebase(result.rulebase, out / "model.rules")
    _write_loss_csv(out / "loss.csv", result.loss_curve)
    _write_predictions_csv(out / "predictions.csv", raw.targets, predictions)

    acc = _accuracy_text(acc_value)
    summary = "\n".join([
        "# Fit summary",
        "",
        "| method | rules | iterations | learning time (s) | accuracy (%) |",
        "|---|---|---|---|---|",
        f"| {args.method} | {len(result.rulebase)} | {args.iterations} "
        f"| {result.elapsed_seconds:.2f} | {acc} |",
        "",
        f"- dataset: {args.dataset} ({len(raw)} samples, {raw.input_dim} inputs, "
        f"target `{raw.target_name}`)",
        f"- sets per input: {sets}; eta {args.eta}; d0 {args.d0}; seed {args.seed}",
        "- final recorded loss: "
        + (_fmt(result.loss_curve[-1][1]) if result.loss_curve
           else "n/a (no training step had an active rule)"),
        f"- training samples with no active rule (step skipped): {result.skipped_samples}",
        f"- evaluation fallback rows: {fallbacks}",
        f"- width-floor clamps: {result.width_clamps}",
        "",
    ])
    (out / "summary.md").write_text(summary)

    manifest = {
        "command": "fit",
        "method": args.method,
        "dataset": args.dataset,
        "target": raw.target_name,
        "partitions": {
            "sets": sets,
            "inputs": [
                {"name": n, "lo": p.lo, "hi": p.hi}
                for n, p in zip(norm.input_names, parts)
            ],
        },
        "train": {
            "iterations": cfg.iterations, "eta": cfg.eta, "d0": cfg.threshold,
            "seed": cfg.seed, "shuffle": cfg.shuffle,
        },
        "out": str(out),
        "hardware": _hardware_note(),
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    print(f"{args.method}: {len(result.rulebase)} rules, accuracy {acc}%, "
          f"{result.elapsed_seconds:.2f}s — artifacts in {out}")
    return EXIT_OK


def cmd_predict(args) -> int:
    out = Path(args.out)
    model_path = out / "model.rules"
    if not model_path.exists():
        raise FileNotFoundError(f"{model_path}: no saved model (run fit first)")
    rb = load_rulebase(model_path)
    data = _load_dataset(args.dataset)
    if data.input_dim != rb.input_dim:
        raise DataFormatError(
            f"model takes {rb.input_dim} inputs but {args.dataset} has {data.input_dim}"
        )
    method = args.method or ("production" if rb.kind == TRIANGULAR else "sugeno")
    xs = rb.apply_input_transforms(data.inputs)
    predictions, fallbacks = predict_batch(
        rb, xs, method=method, threshold=args.d0,
        fallback_all_rules=args.fallback_all_rules,
    )
    _write_predictions_csv(out / "predictions.csv", data.targets, predictions)
    note = f" ({fallbacks} fallback rows)" if fallbacks else ""
    print(f"{method}: {len(data)} predictions{note} -> {out / 'predictions.csv'}")
    return EXIT_OK


def cmd_bench(args) -> int:
    raw = _load_dataset(args.dataset)
    norm, _ = normalize_inputs(raw)
    sets = _default_sets(args.sets, norm.input_dim)
    result = run_bench(
        norm, sets=sets, iterations=args.iterations, eta=args.eta,
        threshold=args.d0, seed=args.seed, hardware_note=_hardware_note(),
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    lines = ["scheme,rep,s_per_100_iterations"]
    lines += [f"{scheme},{rep},{_fmt(t)}" for scheme, rep, t in bench_rows(result)]
    (out / "bench.csv").write_text("\n".join(lines) + "\n")
    (out / "bench.md").write_text(format_bench_markdown(result))
    print(f"ratio (sugeno / production, median s/100 iters): {result.ratio:.3f} "
          f"— details in {out / 'bench.md'}")
    return EXIT_OK


def cmd_report(args) -> int:
    from .report import write_report  # deferred: pulls in matplotlib

    written = write_report(args.out)
    for path in written:
        print(f"wrote {path}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataFormatError, ConstantColumnError, RuleFormatError, OSError,
            ValueError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (InferenceError, OverflowError, FloatingPointError,
            ZeroDivisionError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
