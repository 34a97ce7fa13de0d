"""Timing benchmark: the two training schemes under identical budgets.

Absolute training times depend entirely on the host, so the quantity of
interest is the ratio between the two schemes, not either time alone.
To keep the ratio stable the benchmark pins the process to one CPU while
timing (when the platform allows it), interleaves repetitions of the two
arms so slow drift affects both equally, and reports per-100-iteration
times with min and median over the repetitions.  Only the gradient-descent
loop is timed; rule-base construction and final evaluation are excluded.
"""

from __future__ import annotations

import contextlib
import os
import statistics
from dataclasses import dataclass, field

from .dataset import Dataset, build_grid_rulebase, partitions_from_dataset
from .learning import TrainConfig, train_production, train_sugeno
from .rulebase import GAUSSIAN, TRIANGULAR

#: Ratios published for this same comparison, quoted in generated reports.
#: All are hardware-bound; none is expected to match a measurement on a
#: different host.  The two PC figures describe the same experiment yet
#: disagree with each other; both are carried verbatim, unadjudicated.
REFERENCE_RATIOS = (
    ("PC (tabulated)", 7.68),
    ("PC (prose)", 5.2),
    ("DE2 FPGA board", 27.961),
)


@dataclass(frozen=True)
class BenchArm:
    """Timing results for one training scheme."""

    method: str
    per100_times: tuple[float, ...]  # seconds per 100 iterations, one per rep

    @property
    def mean(self) -> float:
        return statistics.fmean(self.per100_times)

    @property
    def min(self) -> float:
        return min(self.per100_times)

    @property
    def median(self) -> float:
        return statistics.median(self.per100_times)


@dataclass(frozen=True)
class BenchReport:
    """Both arms plus the ratio of their median per-100-iteration times."""

    production: BenchArm
    sugeno: BenchArm
    iterations: int
    reps: int
    rule_count: int
    hardware_note: str = ""
    extras: dict = field(default_factory=dict)

    @property
    def ratio(self) -> float:
        """Sugeno median time over production median time (> 1 means the
        moving-rate scheme trained faster)."""
        return self.sugeno.median / self.production.median


@contextlib.contextmanager
def _pin_to_one_cpu():
    """Restrict the process to a single CPU for the duration, if possible."""
    getaff = getattr(os, "sched_getaffinity", None)
    setaff = getattr(os, "sched_setaffinity", None)
    if getaff is None or setaff is None:
        yield
        return
    before = getaff(0)
    try:
        setaff(0, {min(before)})
    except OSError:
        yield
        return
    try:
        yield
    finally:
        setaff(0, before)


def run_bench(
    data: Dataset,
    sets: int,
    iterations: int,
    eta: float = 0.01,
    threshold: float = 0.0,
    seed: int = 0,
    reps: int = 5,
    hardware_note: str = "",
) -> BenchReport:
    """Time both training schemes on `data` under the same budget.

    `data` should already be input-normalized.  Each repetition trains
    both schemes from the same fresh grid rule base; repetitions
    alternate between the arms.
    """
    if reps < 5:
        raise ValueError(f"need at least 5 repetitions for stable medians, got {reps}")
    if iterations < 100:
        raise ValueError(f"need at least 100 iterations to time, got {iterations}")
    parts = partitions_from_dataset(data, sets)
    tri = build_grid_rulebase(parts, TRIANGULAR)
    gau = build_grid_rulebase(parts, GAUSSIAN)
    # Record losses only at the ends so the timed loop is all arithmetic.
    cfg = TrainConfig(
        iterations=iterations, eta=eta, threshold=threshold, seed=seed,
        record_every=iterations,
    )
    scale = 100.0 / iterations
    prod_times: list[float] = []
    sug_times: list[float] = []
    with _pin_to_one_cpu():
        # One untimed warm-up of each arm settles allocator and cache state.
        train_production(tri, data, cfg)
        train_sugeno(gau, data, cfg)
        for _ in range(reps):
            prod_times.append(train_production(tri, data, cfg).elapsed_seconds * scale)
            sug_times.append(train_sugeno(gau, data, cfg).elapsed_seconds * scale)
    return BenchReport(
        production=BenchArm("production", tuple(prod_times)),
        sugeno=BenchArm("sugeno", tuple(sug_times)),
        iterations=iterations,
        reps=reps,
        rule_count=len(tri),
        hardware_note=hardware_note,
    )


def format_bench_markdown(report: BenchReport) -> str:
    """Render a timing report with the measured ratio and reference figures."""
    lines = [
        "# Training-time comparison",
        "",
        f"Budget: {report.iterations} iterations per run, {report.reps} repetitions "
        f"per scheme, {report.rule_count} rules.",
    ]
    if report.hardware_note:
        lines.append(f"Host: {report.hardware_note}.")
    lines += [
        "",
        "| scheme | s / 100 iterations (mean) | min | median |",
        "|---|---|---|---|",
    ]
    for arm in (report.production, report.sugeno):
        lines.append(
            f"| {arm.method} | {arm.mean:.6f} | {arm.min:.6f} | {arm.median:.6f} |"
        )
    lines += [
        "",
        f"**Measured ratio (sugeno / production, medians): {report.ratio:.3f}**",
        "",
        "Reference ratios reported for this same comparison on other hardware:",
        "",
    ]
    for host, value in REFERENCE_RATIOS:
        lines.append(f"- {value}x — {host}")
    lines += [
        "",
        "The two PC figures describe the same experiment and disagree with each",
        "other; they are quoted verbatim without adjudication.  All reference",
        "ratios are hardware-specific and are not expected to match the value",
        "measured here — only the direction (ratio above 1) carries over.",
        "",
    ]
    return "\n".join(lines)


def bench_rows(report: BenchReport) -> list[tuple]:
    """Raw per-repetition rows for CSV output: (scheme, rep, s/100 iters)."""
    rows = []
    for arm in (report.production, report.sugeno):
        for k, t in enumerate(arm.per100_times, start=1):
            rows.append((arm.method, k, t))
    return rows
