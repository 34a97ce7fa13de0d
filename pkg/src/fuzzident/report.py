"""Figures and a consolidated report from run artifacts.

Operates on the files a `fit` or `bench` run leaves in its output
directory — `loss.csv`, `predictions.csv`, `bench.csv`, `summary.md` —
and renders PNG figures next to them plus a single `report.md` tying
everything together.  Rendering is file-to-file; nothing is displayed.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .dataset import DataFormatError  # noqa: E402


def _read_csv(path: Path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataFormatError(f"{path}: empty file") from None
        return header, [row for row in reader if row]


def _columns(path: Path, names: tuple[str, ...]) -> list[list[float]]:
    header, rows = _read_csv(path)
    try:
        idx = [header.index(n) for n in names]
    except ValueError as exc:
        raise DataFormatError(f"{path}: expected columns {names}, got {header}") from exc
    cols: list[list[float]] = [[] for _ in names]
    for r, row in enumerate(rows, start=2):
        for c, i in zip(cols, idx):
            try:
                c.append(float(row[i]))
            except (ValueError, IndexError) as exc:
                raise DataFormatError(f"{path}: line {r}: bad value") from exc
    return cols


def render_loss_curve(loss_csv: Path, out_png: Path) -> None:
    """Loss against iteration, log-scaled when the curve spans decades."""
    iters, losses = _columns(loss_csv, ("iteration", "loss"))
    fig, ax = plt.subplots(figsize=(7, 4.2))
    ax.plot(iters, losses, lw=0.8, color="#1f6fb2")
    positive = [v for v in losses if v > 0]
    if positive and max(positive) / min(positive) > 100:
        ax.set_yscale("log")
    ax.set_xlabel("iteration")
    ax.set_ylabel("squared-error loss")
    ax.set_title("Training loss")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_png, dpi=120)
    plt.close(fig)


def render_predictions(pred_csv: Path, out_png: Path) -> None:
    """Target and prediction traces over the sample index."""
    rows, targets, preds = _columns(pred_csv, ("row", "target", "prediction"))
    fig, ax = plt.subplots(figsize=(7, 4.2))
    ax.plot(rows, targets, "o-", ms=4, lw=1.0, color="#333333", label="target")
    ax.plot(rows, preds, "s--", ms=4, lw=1.0, color="#c44e52", label="prediction")
    ax.set_xlabel("sample")
    ax.set_ylabel("output")
    ax.set_title("Model output against targets")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_png, dpi=120)
    plt.close(fig)


def render_timing(bench_csv: Path, out_png: Path) -> None:
    """Per-repetition times for both schemes, with medians marked."""
    header, rows = _read_csv(bench_csv)
    try:
        s_i = header.index("scheme")
        t_i = header.index("s_per_100_iterations")
    except ValueError as exc:
        raise DataFormatError(f"{bench_csv}: unexpected columns {header}") from exc
    times: dict[str, list[float]] = {}
    for row in rows:
        times.setdefault(row[s_i], []).append(float(row[t_i]))
    schemes = sorted(times)
    fig, ax = plt.subplots(figsize=(5.5, 4.2))
    for k, scheme in enumerate(schemes):
        vals = times[scheme]
        ax.scatter([k] * len(vals), vals, alpha=0.7, color="#1f6fb2", zorder=3)
        med = sorted(vals)[len(vals) // 2] if len(vals) % 2 else (
            sum(sorted(vals)[len(vals) // 2 - 1 : len(vals) // 2 + 1]) / 2
        )
        ax.hlines(med, k - 0.25, k + 0.25, color="#c44e52", lw=2, zorder=4)
    ax.set_xticks(range(len(schemes)), schemes)
    ax.set_ylabel("seconds per 100 iterations")
    ax.set_title("Training time per scheme (bars mark medians)")
    ax.set_ylim(bottom=0)
    ax.grid(True, axis="y", alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_png, dpi=120)
    plt.close(fig)


def write_report(out_dir) -> list[Path]:
    """Render every figure the directory has data for, plus `report.md`.

    Returns the paths written.  At least one renderable artifact must be
    present.
    """
    out_dir = Path(out_dir)
    written: list[Path] = []
    sections: list[str] = ["# Run report", ""]

    summary = out_dir / "summary.md"
    if summary.exists():
        sections += [summary.read_text().strip(), ""]

    loss_csv = out_dir / "loss.csv"
    if loss_csv.exists():
        png = out_dir / "loss_curve.png"
        render_loss_curve(loss_csv, png)
        written.append(png)
        sections += ["## Loss", "", f"![training loss]({png.name})", ""]

    pred_csv = out_dir / "predictions.csv"
    if pred_csv.exists():
        png = out_dir / "predictions.png"
        render_predictions(pred_csv, png)
        written.append(png)
        sections += ["## Predictions", "", f"![predictions]({png.name})", ""]

    bench_csv = out_dir / "bench.csv"
    if bench_csv.exists():
        png = out_dir / "timing.png"
        render_timing(bench_csv, png)
        written.append(png)
        sections += ["## Timing", "", f"![timing]({png.name})", ""]
        bench_md = out_dir / "bench.md"
        if bench_md.exists():
            sections += [bench_md.read_text().strip(), ""]

    if not written:
        raise FileNotFoundError(
            f"{out_dir}: nothing to report on (no loss.csv, predictions.csv, or bench.csv)"
        )
    report = out_dir / "report.md"
    report.write_text("\n".join(sections))
    written.append(report)
    return written
