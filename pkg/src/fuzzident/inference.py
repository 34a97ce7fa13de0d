"""The three inference engines over a shared rule base.

- ``infer_production``: moving-rate/production-term inference.  Each rule
  scores ``1 - min_j rate_j``; only rules whose score clears a threshold
  participate in the weighted average of consequent lines.  Because one
  well-matched dimension keeps the score positive, a rule still
  contributes when other dimensions miss its support entirely.
- ``infer_sugeno``: classic weighted average with per-rule firing
  strength equal to the product of antecedent memberships.
- ``infer_type_distance``: weights each rule by the product of all other
  rules' center distances, so the nearest rule dominates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AllDistancesZeroError, EmptyActiveSetError, ZeroWeightSumError
from .rulebase import GAUSSIAN, TRIANGULAR, RuleBase
from .sets import FuzzyTriangle, InputValue, Singleton, input_center


def production_term(rates) -> float:
    """Rule score from its per-dimension moving rates: 1 - min(rates)."""
    rates = list(rates)
    if not rates:
        raise ValueError("need at least one moving rate")
    return 1.0 - min(rates)


def active_rules(terms, threshold: float) -> list[int]:
    """Indices of rules whose production term strictly exceeds the threshold."""
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"activation threshold must be in [0, 1], got {threshold}")
    return [i for i, d in enumerate(terms) if d > threshold]


@dataclass(frozen=True)
class ProductionResult:
    """Output of one production-term inference, with its intermediates."""

    output: float
    production_terms: np.ndarray
    active_set: tuple[int, ...]

    @property
    def active_count(self) -> int:
        return len(self.active_set)


def _check_inputs(rb: RuleBase, inputs) -> list:
    inputs = list(inputs)
    if len(inputs) != rb.input_dim:
        raise ValueError(f"rule base takes {rb.input_dim} inputs, got {len(inputs)}")
    return inputs


def moving_rate_columns(rb: RuleBase, inputs) -> np.ndarray:
    """Per-rule, per-dimension moving rates, shape (m, n).

    Inputs may be plain floats, `Singleton`, or `FuzzyTriangle`; a
    zero-width triangle produces bit-identical rates to its center value.
    """
    if rb.kind != TRIANGULAR:
        raise ValueError("moving rates are defined for triangular rule bases only")
    inputs = _check_inputs(rb, inputs)
    params = rb.antecedent_params
    left, center, right = params[:, :, 0], params[:, :, 1], params[:, :, 2]

    rates = np.empty((len(rb), rb.input_dim))
    for j, value in enumerate(inputs):
        l, c, r = left[:, j], center[:, j], right[:, j]
        if isinstance(value, FuzzyTriangle):
            x = value.center
            delta = x - c
            rate = np.where(
                delta >= 0.0,
                delta / ((r - c) + (value.right - value.center)),
                -delta / ((c - l) + (value.center - value.left)),
            )
            rate = np.minimum(1.0, rate)
            rates[:, j] = np.where((x <= l) | (x >= r), 1.0, rate)
        else:
            x = value.value if isinstance(value, Singleton) else float(value)
            delta = x - c
            rate = np.where(delta >= 0.0, delta / (r - c), -delta / (c - l))
            rates[:, j] = np.minimum(1.0, rate)
    return rates


def infer_production(rb: RuleBase, inputs, threshold: float) -> ProductionResult:
    """Moving-rate inference: weighted average of the active rules' consequents.

    Raises `EmptyActiveSetError` when no rule's production term exceeds
    the threshold; callers choose whether to retry with threshold 0
    (which admits every rule with a positive term).
    """
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"activation threshold must be in [0, 1], got {threshold}")
    rates = moving_rate_columns(rb, inputs)
    terms = 1.0 - rates.min(axis=1)
    active = np.flatnonzero(terms > threshold)
    if active.size == 0:
        raise EmptyActiveSetError(
            f"no rule's production term exceeds {threshold}; "
            f"best is {terms.max():.6g}"
        )
    centers = np.array(
        [input_center(v) if isinstance(v, (Singleton, FuzzyTriangle)) else float(v)
         for v in _check_inputs(rb, inputs)],
        dtype=np.float64,
    )
    values = rb.consequent_values(centers)
    weights = terms[active]
    output = float(weights @ values[active] / weights.sum())
    terms.setflags(write=False)
    return ProductionResult(
        output=output, production_terms=terms, active_set=tuple(int(i) for i in active)
    )


def membership_columns(rb: RuleBase, xs) -> np.ndarray:
    """Per-rule, per-dimension memberships at a crisp input, shape (m, n)."""
    xs = np.asarray([input_center(v) if isinstance(v, (Singleton, FuzzyTriangle)) else v
                     for v in xs], dtype=np.float64)
    if xs.shape != (rb.input_dim,):
        raise ValueError(f"rule base takes {rb.input_dim} inputs, got {xs.shape}")
    params = rb.antecedent_params
    if rb.kind == GAUSSIAN:
        a, b = params[:, :, 0], params[:, :, 1]
        return np.exp(-((xs - a) ** 2) / b)
    left, center, right = params[:, :, 0], params[:, :, 1], params[:, :, 2]
    mem = np.where(
        xs >= center, (right - xs) / (right - center), (xs - left) / (center - left)
    )
    return np.where((xs <= left) | (xs >= right), 0.0, mem)


def min_matching_degrees(rb: RuleBase, xs) -> np.ndarray:
    """Per-rule matching degree under min composition: min_j membership_ij(x_j).

    This is the quantity a min-based engine would fire each rule with; it
    is 0 whenever any one dimension misses the rule's support, which is
    exactly the failure mode the production term avoids.
    """
    return membership_columns(rb, xs).min(axis=1)


def infer_sugeno(rb: RuleBase, xs) -> float:
    """Product-of-memberships weighted average of consequent lines.

    With gaussian antecedents the weight sum is strictly positive for any
    input.  Triangular rule bases are accepted too, but an input outside
    every rule's support on some dimension leaves all weights zero and
    raises `ZeroWeightSumError`.
    """
    xs = np.asarray([input_center(v) if isinstance(v, (Singleton, FuzzyTriangle)) else v
                     for v in xs], dtype=np.float64)
    weights = membership_columns(rb, xs).prod(axis=1)
    total = weights.sum()
    if total <= 0.0:
        raise ZeroWeightSumError(
            "every rule's firing weight is zero; input is outside all rule supports"
        )
    values = rb.consequent_values(xs)
    return float(weights @ values / total)


def infer_type_distance(rb: RuleBase, inputs) -> float:
    """Distance-weighted interpolation between rule consequents.

    Each rule's weight is the product of every *other* rule's city-block
    distance between its antecedent centers and the input, so a rule at
    distance 0 takes the entire output.  Two or more (but not all) rules
    at distance 0 average their consequents; all rules at distance 0 is
    an error.
    """
    inputs = _check_inputs(rb, inputs)
    xs = np.asarray([input_center(v) if isinstance(v, (Singleton, FuzzyTriangle)) else v
                     for v in inputs], dtype=np.float64)
    centers = (
        rb.antecedent_params[:, :, 1] if rb.kind == TRIANGULAR
        else rb.antecedent_params[:, :, 0]
    )
    distances = np.abs(centers - xs).sum(axis=1)
    values = rb.consequent_values(xs)
    m = len(rb)
    if m == 1:
        return float(values[0])

    zero = np.flatnonzero(distances == 0.0)
    if zero.size == m:
        raise AllDistancesZeroError(
            "input coincides with every rule's antecedent centers"
        )
    if zero.size == 1:
        return float(values[zero[0]])
    if zero.size >= 2:
        return float(values[zero].mean())

    # weight_i = prod of all other distances, via prefix/suffix products
    prefix = np.concatenate(([1.0], np.cumprod(distances[:-1])))
    suffix = np.concatenate((np.cumprod(distances[::-1])[-2::-1], [1.0]))
    weights = prefix * suffix
    return float(weights @ values / weights.sum())
