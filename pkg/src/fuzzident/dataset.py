"""Dataset loading, normalization, bundled fixtures, and grid rule bases."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from importlib import resources
from itertools import product
from pathlib import Path

import numpy as np

from .rulebase import GAUSSIAN, TRIANGULAR, Rule, RuleBase
from .sets import GaussianSet, TriangularSet

# Gaussian width chosen so membership crosses 0.5 exactly where the
# matching 50%-overlap triangles do: exp(-(spacing/2)^2 / width) = 0.5.
_LN2 = float(np.log(2.0))


class DataFormatError(ValueError):
    """A data file cannot be parsed into a numeric table."""


class ConstantColumnError(ValueError):
    """A column has zero range and cannot be min-max scaled."""


@dataclass(frozen=True)
class Dataset:
    """A numeric table split into input columns and one target column."""

    inputs: np.ndarray
    targets: np.ndarray
    input_names: tuple[str, ...]
    target_name: str

    def __post_init__(self):
        inputs = np.asarray(self.inputs, dtype=np.float64)
        targets = np.asarray(self.targets, dtype=np.float64)
        if inputs.ndim != 2:
            raise ValueError("inputs must be a 2-D array")
        if targets.ndim != 1 or targets.shape[0] != inputs.shape[0]:
            raise ValueError("need one target per input row")
        if len(self.input_names) != inputs.shape[1]:
            raise ValueError("need one name per input column")
        if not (np.isfinite(inputs).all() and np.isfinite(targets).all()):
            raise ValueError("dataset contains non-finite values")
        inputs.setflags(write=False)
        targets.setflags(write=False)
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "targets", targets)

    def __len__(self) -> int:
        return self.inputs.shape[0]

    @property
    def input_dim(self) -> int:
        return self.inputs.shape[1]


@dataclass(frozen=True)
class AffineMap:
    """y = scale * x + offset, with an exact inverse."""

    scale: float
    offset: float

    def apply(self, x):
        return self.scale * np.asarray(x, dtype=np.float64) + self.offset

    def invert(self, y):
        return (np.asarray(y, dtype=np.float64) - self.offset) / self.scale


def _parse_table(text: str, source: str, target_column: str | None) -> Dataset:
    reader = csv.reader(io.StringIO(text))
    rows = [row for row in reader if row]
    if not rows:
        raise DataFormatError(f"{source}: empty file")
    header = [name.strip() for name in rows[0]]
    if len(rows) == 1:
        raise DataFormatError(f"{source}: header but no data rows")
    if len(header) < 2:
        raise DataFormatError(f"{source}: need at least one input column and a target column")

    if target_column is None:
        target_idx = len(header) - 1
    else:
        try:
            target_idx = header.index(target_column)
        except ValueError:
            raise DataFormatError(
                f"{source}: no column named {target_column!r} (have {', '.join(header)})"
            ) from None

    values = np.empty((len(rows) - 1, len(header)), dtype=np.float64)
    for r, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise DataFormatError(
                f"{source}: row {r} has {len(row)} cells, header has {len(header)}"
            )
        for c, cell in enumerate(row):
            try:
                values[r - 2, c] = float(cell)
            except ValueError:
                raise DataFormatError(
                    f"{source}: row {r}, column {header[c]!r}: not a number: {cell.strip()!r}"
                ) from None

    input_idx = [c for c in range(len(header)) if c != target_idx]
    return Dataset(
        inputs=values[:, input_idx],
        targets=values[:, target_idx],
        input_names=tuple(header[c] for c in input_idx),
        target_name=header[target_idx],
    )


def load_csv(path, target_column: str | None = None) -> Dataset:
    """Read a numeric CSV with a header row.

    The last column is the target unless `target_column` names another one.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataFormatError(f"{path}: {exc.strerror or exc}") from None
    return _parse_table(text, str(path), target_column)


BUILTIN_DATASETS = ("precipitation", "security")


def load_builtin(name: str) -> Dataset:
    """Load one of the bundled example datasets by name."""
    if name not in BUILTIN_DATASETS:
        raise DataFormatError(
            f"unknown dataset {name!r} (built-ins: {', '.join(BUILTIN_DATASETS)})"
        )
    text = resources.files("fuzzident").joinpath(f"data/{name}.csv").read_text(encoding="utf-8")
    return _parse_table(text, f"builtin:{name}", None)


def load_precipitation() -> Dataset:
    """26 yearly observations: two climate factors -> precipitation (mm)."""
    return load_builtin("precipitation")


def load_security() -> Dataset:
    """60 observations: three factors -> network security situation value."""
    return load_builtin("security")


def normalize_inputs(ds: Dataset) -> tuple[Dataset, tuple[AffineMap, ...]]:
    """Min-max scale each input column to [-1, 1]; targets stay as-is.

    Returns the scaled dataset and the per-column forward maps so raw
    inputs can be transformed the same way at prediction time.
    """
    maps = []
    cols = []
    for j in range(ds.input_dim):
        col = ds.inputs[:, j]
        lo, hi = float(col.min()), float(col.max())
        if hi == lo:
            raise ConstantColumnError(
                f"input column {ds.input_names[j]!r} is constant ({lo}); cannot scale"
            )
        m = AffineMap(scale=2.0 / (hi - lo), offset=-(hi + lo) / (hi - lo))
        maps.append(m)
        cols.append(m.apply(col))
    scaled = Dataset(
        inputs=np.column_stack(cols),
        targets=ds.targets,
        input_names=ds.input_names,
        target_name=ds.target_name,
    )
    return scaled, tuple(maps)


@dataclass(frozen=True)
class PartitionSpec:
    """Evenly spaced fuzzy partition of one input dimension."""

    sets: int
    lo: float
    hi: float

    def __post_init__(self):
        if self.sets < 2:
            raise ValueError(f"a partition needs at least 2 sets, got {self.sets}")
        if not self.lo < self.hi:
            raise ValueError(f"partition range needs lo < hi, got [{self.lo}, {self.hi}]")

    @property
    def spacing(self) -> float:
        return (self.hi - self.lo) / (self.sets - 1)

    @property
    def centers(self) -> tuple[float, ...]:
        return tuple(self.lo + k * self.spacing for k in range(self.sets))

    @property
    def labels(self) -> tuple[str, ...]:
        """Conventional names in ascending center order."""
        if self.sets == 6:
            return ("NL", "NM", "NS", "PS", "PM", "PL")
        if self.sets == 3:
            return ("PS", "PM", "PL")
        return tuple(f"S{k + 1}" for k in range(self.sets))


def partitions_from_dataset(ds: Dataset, sets: int) -> tuple[PartitionSpec, ...]:
    """One partition per input column, spanning its observed range."""
    return tuple(
        PartitionSpec(sets, float(ds.inputs[:, j].min()), float(ds.inputs[:, j].max()))
        for j in range(ds.input_dim)
    )


def build_grid_rulebase(partitions, kind: str = TRIANGULAR) -> RuleBase:
    """Cartesian-product rule base over evenly spaced per-dimension sets.

    Triangular sets overlap 50%: each support ends at the adjacent
    centers, with the edge sets extended one spacing beyond the range.
    Gaussian sets share the triangles' centers and cross membership 0.5
    at the same points.  Every consequent coefficient starts at 0.
    """
    partitions = tuple(partitions)
    if not partitions:
        raise ValueError("need at least one partition")
    if kind not in (TRIANGULAR, GAUSSIAN):
        raise ValueError(f"unknown antecedent kind {kind!r}")

    per_dim_sets: list[list] = []
    per_dim_labels: list[tuple[str, ...]] = []
    for p in partitions:
        centers = p.centers
        step = p.spacing
        if kind == TRIANGULAR:
            dim_sets = [
                TriangularSet(
                    centers[k - 1] if k > 0 else centers[0] - step,
                    centers[k],
                    centers[k + 1] if k < p.sets - 1 else centers[-1] + step,
                )
                for k in range(p.sets)
            ]
        else:
            width = (step / 2.0) ** 2 / _LN2
            dim_sets = [GaussianSet(c, width) for c in centers]
        per_dim_sets.append(dim_sets)
        per_dim_labels.append(p.labels)

    n = len(partitions)
    zero_coeffs = (0.0,) * (n + 1)
    rules = [
        Rule(
            antecedents=tuple(per_dim_sets[j][k] for j, k in enumerate(combo)),
            coefficients=zero_coeffs,
            labels=tuple(per_dim_labels[j][k] for j, k in enumerate(combo)),
        )
        for combo in product(*(range(p.sets) for p in partitions))
    ]
    return RuleBase(rules, partition_labels=tuple(per_dim_labels))
