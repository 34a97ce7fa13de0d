"""Rule and rule-base containers, plus the plain-text model format.

A rule base stacks its antecedent parameters and consequent coefficients
into read-only numpy arrays so the engines can work vectorized; the
per-rule `Rule` objects remain the construction and inspection surface.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .sets import GaussianSet, TriangularSet

AntecedentSet = TriangularSet | GaussianSet

TRIANGULAR = "triangular"
GAUSSIAN = "gaussian"

_FORMAT_MAGIC = "fuzzident-rules"
_FORMAT_VERSION = 1


class RuleFormatError(ValueError):
    """A rule-base file does not follow the documented grammar."""


@dataclass(frozen=True)
class Rule:
    """One fuzzy rule: antecedent sets per input dimension, affine consequent.

    The consequent value at input x is
    ``coefficients[0] + sum(coefficients[j + 1] * x[j])``.
    Labels name the partition sets the antecedents came from; they are
    carried as metadata only.
    """

    antecedents: tuple[AntecedentSet, ...]
    coefficients: tuple[float, ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        n = len(self.antecedents)
        if n == 0:
            raise ValueError("a rule needs at least one antecedent")
        if len(self.coefficients) != n + 1:
            raise ValueError(
                f"rule with {n} antecedents needs {n + 1} coefficients, "
                f"got {len(self.coefficients)}"
            )
        kinds = {type(s) for s in self.antecedents}
        if len(kinds) > 1:
            raise ValueError("a rule cannot mix triangular and gaussian antecedents")
        if self.labels is not None and len(self.labels) != n:
            raise ValueError("labels must match the number of antecedents")

    def consequent(self, xs) -> float:
        """Evaluate the consequent line at a crisp input vector."""
        c = self.coefficients
        return c[0] + sum(cj * xj for cj, xj in zip(c[1:], xs))


class RuleBase:
    """An ordered, immutable collection of rules over one input space.

    Attributes meant for engine use:

    - ``kind``: "triangular" or "gaussian" (all rules agree).
    - ``antecedent_params``: (m, n, 3) array of (left, center, right) for
      triangular bases, (m, n, 2) of (center, width) for gaussian ones.
    - ``coefficients``: (m, n + 1) consequent coefficient array.

    ``input_transforms``, when present, records the affine map applied to
    each raw input column before inference (normalized = scale * raw +
    offset); it travels with the model file so predictions can be made
    from raw data.
    """

    def __init__(self, rules, partition_labels=None, input_transforms=None):
        rules = tuple(rules)
        if not rules:
            raise ValueError("a rule base needs at least one rule")
        n = len(rules[0].antecedents)
        first_kind = type(rules[0].antecedents[0])
        for k, rule in enumerate(rules):
            if len(rule.antecedents) != n:
                raise ValueError(f"rule {k} has {len(rule.antecedents)} antecedents, expected {n}")
            if type(rule.antecedents[0]) is not first_kind:
                raise ValueError("all rules must share one antecedent kind")

        self.rules = rules
        self.input_dim = n
        self.kind = TRIANGULAR if first_kind is TriangularSet else GAUSSIAN
        self.partition_labels = (
            tuple(tuple(labels) for labels in partition_labels)
            if partition_labels is not None
            else None
        )
        self.input_transforms = (
            tuple((float(a), float(b)) for a, b in input_transforms)
            if input_transforms is not None
            else None
        )
        if self.input_transforms is not None and len(self.input_transforms) != n:
            raise ValueError("need one input transform per dimension")

        if self.kind == TRIANGULAR:
            params = [[(s.left, s.center, s.right) for s in r.antecedents] for r in rules]
        else:
            params = [[(s.center, s.width) for s in r.antecedents] for r in rules]
        self.antecedent_params = np.asarray(params, dtype=np.float64)
        self.coefficients = np.asarray([r.coefficients for r in rules], dtype=np.float64)
        self.antecedent_params.setflags(write=False)
        self.coefficients.setflags(write=False)

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)

    def consequent_values(self, xs: np.ndarray) -> np.ndarray:
        """Per-rule consequent line values at a crisp input vector, shape (m,)."""
        xs = np.asarray(xs, dtype=np.float64)
        return self.coefficients[:, 0] + self.coefficients[:, 1:] @ xs

    def apply_input_transforms(self, xs: np.ndarray) -> np.ndarray:
        """Map raw inputs into the space the rules were built in."""
        xs = np.asarray(xs, dtype=np.float64)
        if self.input_transforms is None:
            return xs
        scale = np.array([t[0] for t in self.input_transforms])
        offset = np.array([t[1] for t in self.input_transforms])
        return scale * xs + offset

    def replace_params(self, antecedent_params, coefficients) -> "RuleBase":
        """A new rule base with the same labels/metadata and new parameters."""
        antecedent_params = np.asarray(antecedent_params, dtype=np.float64)
        coefficients = np.asarray(coefficients, dtype=np.float64)
        if antecedent_params.shape != self.antecedent_params.shape:
            raise ValueError("antecedent parameter shape cannot change")
        if coefficients.shape != self.coefficients.shape:
            raise ValueError("coefficient shape cannot change")
        rules = []
        for i, old in enumerate(self.rules):
            if self.kind == TRIANGULAR:
                sets = tuple(
                    TriangularSet(*antecedent_params[i, j]) for j in range(self.input_dim)
                )
            else:
                sets = tuple(
                    GaussianSet(*antecedent_params[i, j]) for j in range(self.input_dim)
                )
            rules.append(Rule(sets, tuple(coefficients[i]), labels=old.labels))
        return RuleBase(
            rules,
            partition_labels=self.partition_labels,
            input_transforms=self.input_transforms,
        )

    def with_input_transforms(self, transforms) -> "RuleBase":
        return RuleBase(
            self.rules, partition_labels=self.partition_labels, input_transforms=transforms
        )


def _fmt(x: float) -> str:
    # repr() gives the shortest decimal that round-trips a float64
    return repr(float(x))


def save_rulebase(rb: RuleBase, path) -> None:
    """Write a rule base in the documented text format (see README)."""
    lines = [f"{_FORMAT_MAGIC} {_FORMAT_VERSION}", f"kind {rb.kind}", f"inputs {rb.input_dim}"]
    if rb.partition_labels is not None:
        for j, labels in enumerate(rb.partition_labels):
            lines.append(f"labels {j + 1} " + " ".join(labels))
    if rb.input_transforms is not None:
        for j, (a, b) in enumerate(rb.input_transforms):
            lines.append(f"scale {j + 1} {_fmt(a)} {_fmt(b)}")
    for rule in rb.rules:
        labels = rule.labels if rule.labels is not None else ("-",) * len(rule.antecedents)
        groups = [" ".join(labels)]
        for s in rule.antecedents:
            if isinstance(s, TriangularSet):
                groups.append(f"{_fmt(s.left)} {_fmt(s.center)} {_fmt(s.right)}")
            else:
                groups.append(f"{_fmt(s.center)} {_fmt(s.width)}")
        groups.append(" ".join(_fmt(c) for c in rule.coefficients))
        lines.append("rule " + " | ".join(groups))
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def _parse_floats(text: str, count: int, lineno: int) -> list[float]:
    parts = text.split()
    if len(parts) != count:
        raise RuleFormatError(f"line {lineno}: expected {count} numbers, got {len(parts)}")
    try:
        return [float(p) for p in parts]
    except ValueError as exc:
        raise RuleFormatError(f"line {lineno}: {exc}") from None


def load_rulebase(path) -> RuleBase:
    """Read a rule base written by `save_rulebase`."""
    text = Path(path).read_text(encoding="ascii")
    kind = None
    n = None
    labels_by_dim: dict[int, tuple[str, ...]] = {}
    scales_by_dim: dict[int, tuple[float, float]] = {}
    rules: list[Rule] = []
    saw_magic = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not saw_magic:
            parts = line.split()
            if parts[0] != _FORMAT_MAGIC or len(parts) != 2 or parts[1] != str(_FORMAT_VERSION):
                raise RuleFormatError(
                    f"line {lineno}: expected header '{_FORMAT_MAGIC} {_FORMAT_VERSION}'"
                )
            saw_magic = True
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key == "kind":
            if rest not in (TRIANGULAR, GAUSSIAN):
                raise RuleFormatError(f"line {lineno}: unknown kind {rest!r}")
            kind = rest
        elif key == "inputs":
            try:
                n = int(rest)
            except ValueError:
                raise RuleFormatError(f"line {lineno}: bad input count {rest!r}") from None
        elif key == "labels":
            dim, _, names = rest.partition(" ")
            labels_by_dim[int(dim) - 1] = tuple(names.split())
        elif key == "scale":
            dim, _, nums = rest.partition(" ")
            a, b = _parse_floats(nums, 2, lineno)
            scales_by_dim[int(dim) - 1] = (a, b)
        elif key == "rule":
            if kind is None or n is None:
                raise RuleFormatError(f"line {lineno}: rule before kind/inputs header")
            groups = [g.strip() for g in rest.split("|")]
            if len(groups) != n + 2:
                raise RuleFormatError(
                    f"line {lineno}: rule needs {n + 2} '|' groups (labels, {n} antecedents, "
                    f"coefficients), got {len(groups)}"
                )
            label_parts = tuple(groups[0].split())
            if len(label_parts) != n:
                raise RuleFormatError(f"line {lineno}: expected {n} labels")
            labels = None if all(p == "-" for p in label_parts) else label_parts
            sets: list[AntecedentSet] = []
            for j in range(n):
                if kind == TRIANGULAR:
                    left, center, right = _parse_floats(groups[1 + j], 3, lineno)
                    sets.append(TriangularSet(left, center, right))
                else:
                    center, width = _parse_floats(groups[1 + j], 2, lineno)
                    sets.append(GaussianSet(center, width))
            coeffs = tuple(_parse_floats(groups[n + 1], n + 1, lineno))
            rules.append(Rule(tuple(sets), coeffs, labels=labels))
        else:
            raise RuleFormatError(f"line {lineno}: unknown directive {key!r}")

    if not saw_magic:
        raise RuleFormatError("empty rule-base file")
    if not rules:
        raise RuleFormatError("rule-base file defines no rules")
    if n is None:
        raise RuleFormatError("missing 'inputs' header")

    partition_labels = None
    if labels_by_dim:
        if sorted(labels_by_dim) != list(range(n)):
            raise RuleFormatError("labels must cover dimensions 1..inputs exactly")
        partition_labels = tuple(labels_by_dim[j] for j in range(n))
    transforms = None
    if scales_by_dim:
        if sorted(scales_by_dim) != list(range(n)):
            raise RuleFormatError("scale lines must cover dimensions 1..inputs exactly")
        transforms = tuple(scales_by_dim[j] for j in range(n))
    return RuleBase(rules, partition_labels=partition_labels, input_transforms=transforms)
