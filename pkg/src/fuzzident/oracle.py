"""Brute-force reference implementations used to validate the engines.

Everything here is written in the most literal way possible — scalar
loops, no shared helpers with `inference` or `learning` — so the tests
compare two genuinely independent derivations of each quantity.  Slow on
purpose; never import this module from production code paths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import AllDistancesZeroError, EmptyActiveSetError, ZeroWeightSumError
from .rulebase import RuleBase
from .sets import FuzzyTriangle, GaussianSet, Singleton, TriangularSet


def _center_of(value) -> float:
    if isinstance(value, Singleton):
        return value.value
    if isinstance(value, FuzzyTriangle):
        return value.center
    return float(value)


def _oracle_moving_rate(fset: TriangularSet, value) -> float:
    """Scalar transcription of the crisp and width-aware moving rates."""
    if isinstance(value, FuzzyTriangle):
        x0 = value.center
        if x0 <= fset.left or x0 >= fset.right:
            return 1.0
        if x0 >= fset.center:
            d = (x0 - fset.center) / ((fset.right - fset.center) + (value.right - value.center))
        else:
            d = (fset.center - x0) / ((fset.center - fset.left) + (value.center - value.left))
        return min(1.0, d)
    x0 = _center_of(value)
    if x0 >= fset.center:
        d = (x0 - fset.center) / (fset.right - fset.center)
    else:
        d = (fset.center - x0) / (fset.center - fset.left)
    return min(1.0, d)


def _oracle_consequent(rule, xs) -> float:
    y = rule.coefficients[0]
    for j in range(len(xs)):
        y += rule.coefficients[j + 1] * xs[j]
    return y


def oracle_infer_production(rb: RuleBase, inputs, threshold: float) -> float:
    """Reference production-term inference: one rule at a time, pure scalars."""
    inputs = list(inputs)
    centers = [_center_of(v) for v in inputs]
    terms = []
    for rule in rb.rules:
        rates = [
            _oracle_moving_rate(rule.antecedents[j], inputs[j]) for j in range(len(inputs))
        ]
        terms.append(1.0 - min(rates))
    active = [i for i in range(len(terms)) if terms[i] > threshold]
    if not active:
        raise EmptyActiveSetError("oracle: no rule cleared the activation threshold")
    num = 0.0
    den = 0.0
    for i in active:
        y_i = _oracle_consequent(rb.rules[i], centers)
        num += terms[i] * y_i
        den += terms[i]
    return num / den


def _oracle_membership(fset, x: float) -> float:
    if isinstance(fset, GaussianSet):
        return math.exp(-((x - fset.center) ** 2) / fset.width)
    if x <= fset.left or x >= fset.right:
        return 0.0
    if x >= fset.center:
        return (fset.right - x) / (fset.right - fset.center)
    return (x - fset.left) / (fset.center - fset.left)


def oracle_infer_sugeno(rb: RuleBase, xs) -> float:
    """Reference product-weighted average, one rule at a time."""
    xs = [_center_of(v) for v in xs]
    weights = []
    for rule in rb.rules:
        w = 1.0
        for j in range(len(xs)):
            w *= _oracle_membership(rule.antecedents[j], xs[j])
        weights.append(w)
    total = sum(weights)
    if total <= 0.0:
        raise ZeroWeightSumError("oracle: all firing weights are zero")
    num = 0.0
    for i, rule in enumerate(rb.rules):
        num += weights[i] * _oracle_consequent(rule, xs)
    return num / total


def oracle_infer_type_distance(rb: RuleBase, inputs) -> float:
    """Reference distance-product weighting with explicit nested loops."""
    xs = [_center_of(v) for v in inputs]
    distances = []
    for rule in rb.rules:
        d = 0.0
        for j in range(len(xs)):
            c = rule.antecedents[j].center
            d += abs(c - xs[j])
        distances.append(d)
    values = [_oracle_consequent(rule, xs) for rule in rb.rules]
    m = len(rb.rules)
    if m == 1:
        return values[0]
    zero = [i for i in range(m) if distances[i] == 0.0]
    if len(zero) == m:
        raise AllDistancesZeroError("oracle: all rule distances are zero")
    if len(zero) == 1:
        return values[zero[0]]
    if len(zero) >= 2:
        return sum(values[i] for i in zero) / len(zero)
    num = 0.0
    den = 0.0
    for i in range(m):
        w = 1.0
        for k in range(m):
            if k != i:
                w *= distances[k]
        num += w * values[i]
        den += w
    return num / den


@dataclass(frozen=True)
class FiniteDiffSpec:
    """Central finite-difference settings."""

    h: float = 1e-6
    scheme: str = "central"

    def __post_init__(self):
        if not self.h > 0:
            raise ValueError(f"step must be positive, got {self.h}")
        if self.scheme != "central":
            raise ValueError(f"unsupported scheme {self.scheme!r}")


def finite_diff(f, at: float, spec: FiniteDiffSpec = FiniteDiffSpec()) -> float:
    """Central difference (f(at+h) - f(at-h)) / 2h."""
    hi = f(at + spec.h)
    lo = f(at - spec.h)
    if not (math.isfinite(hi) and math.isfinite(lo)):
        raise ArithmeticError(
            f"function not finite near {at}: f(+h)={hi}, f(-h)={lo}"
        )
    return (hi - lo) / (2.0 * spec.h)
