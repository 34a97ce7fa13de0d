"""Gradient-descent parameter identification for both inference schemes.

Training is sample-wise: each iteration takes one dataset row (cycling in
order, optionally reshuffled per epoch from a seed) and applies one
gradient step on the squared-error loss of that row.

Conditioning: the update loop runs on targets divided by their maximum
absolute value, which makes one learning rate serve the antecedent and
consequent parameter groups regardless of the target's physical scale.
The scale is folded back into the consequent coefficients before the
rule base is returned (the weighted-average output is linear in the
coefficients, so this is exact), and recorded losses are converted back
to the original units.  Without this, a learning rate small enough to
keep antecedent centers stable under hundred-scale targets is too small
for the consequents to converge within any practical iteration budget.

For the moving-rate scheme the learned antecedent parameters are the
triangle centers; each triangle's endpoints translate rigidly with its
center (half-widths stay constant), so `left < center < right` can never
break.  Consequent coefficients are learned for the active rules only.
The minimum in the rule score routes each sample's center gradient to a
single dimension per rule — the lowest-index minimizing one at ties —
using the one-sided slope matching the side of the current input.

For the gaussian scheme all rules fire on every sample, so every center,
width, and coefficient receives a gradient; widths are kept positive by
a hard floor, with clamp events counted in the report.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .errors import DegenerateWeightsError, EmptyActiveSetError
from .inference import infer_production, infer_sugeno, infer_type_distance
from .rulebase import GAUSSIAN, TRIANGULAR, RuleBase

WIDTH_FLOOR = 1e-6


def loss(y_target: float, y_pred: float) -> float:
    """Squared-error loss of one sample: half the squared residual."""
    r = y_target - y_pred
    return 0.5 * r * r


def accuracy(targets, predictions) -> float:
    """100 * (1 - mean relative absolute error), in percent.

    This is a reconstruction of the usual 'accuracy (%)' figure for
    regression tables: the mean of |prediction - target| / |target| over
    the dataset, subtracted from 1 and scaled to percent.  Targets must
    be nonzero for the relative error to make sense.
    """
    targets = np.asarray(targets, dtype=np.float64)
    predictions = np.asarray(predictions, dtype=np.float64)
    if targets.shape != predictions.shape:
        raise ValueError("targets and predictions must have the same shape")
    if np.any(targets == 0.0):
        raise ValueError("accuracy is relative to |target| and needs nonzero targets")
    rel = np.abs(predictions - targets) / np.abs(targets)
    return float(100.0 * (1.0 - rel.mean()))


def _safe_accuracy(targets, predictions) -> float:
    """Accuracy, or nan when a zero target makes relative error undefined."""
    if np.any(np.asarray(targets) == 0.0):
        return float("nan")
    return accuracy(targets, predictions)


def grad_consequent(residual: float, weight: float, weight_sum: float, x_j: float = 1.0) -> float:
    """Partial of the sample loss w.r.t. one consequent coefficient.

    `weight` is the rule's (unnormalized) firing weight and `weight_sum`
    the sum over participating rules; `x_j` is the input coordinate the
    coefficient multiplies (1 for the constant term).
    """
    if weight_sum <= 0.0:
        raise DegenerateWeightsError("weight sum must be positive to take a gradient")
    return -residual * (weight / weight_sum) * x_j


@dataclass(frozen=True)
class TrainConfig:
    """Settings for one training run."""

    iterations: int
    eta: float = 0.01
    threshold: float = 0.0
    seed: int = 0
    record_every: int = 1
    shuffle: bool = False

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError(f"need at least one iteration, got {self.iterations}")
        if not self.eta > 0:
            raise ValueError(f"learning rate must be positive, got {self.eta}")
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError(f"threshold must be in [0, 1], got {self.threshold}")
        if self.record_every < 1:
            raise ValueError(f"record_every must be >= 1, got {self.record_every}")


@dataclass
class TrainReport:
    """Everything a training run produced."""

    method: str
    rulebase: RuleBase
    loss_curve: list[tuple[int, float, float]]  # (iteration, loss, elapsed seconds)
    epoch_seconds: list[float]
    predictions: np.ndarray
    accuracy: float
    elapsed_seconds: float
    skipped_samples: int = 0
    eval_fallbacks: int = 0
    width_clamps: int = 0
    config: TrainConfig | None = None


# --- moving-rate scheme -------------------------------------------------


@dataclass(frozen=True)
class ProductionForward:
    """Record of one forward pass, everything the backward pass needs."""

    x: np.ndarray                # input row (n,)
    terms: np.ndarray            # production term per rule (m,)
    argmin_dim: np.ndarray       # dimension attaining each rule's min rate (m,)
    delta_at_min: np.ndarray     # x_j - center_ij at that dimension (m,)
    active: np.ndarray           # indices of rules with term > threshold
    values: np.ndarray           # consequent line value per active rule
    weight_sum: float            # sum of active terms
    output: float


def production_forward(
    centers: np.ndarray,
    half_left: np.ndarray,
    half_right: np.ndarray,
    coeffs: np.ndarray,
    x: np.ndarray,
    threshold: float,
) -> ProductionForward:
    delta = x - centers
    rate = np.where(delta >= 0.0, delta / half_right, -delta / half_left)
    rate = np.minimum(1.0, rate)
    argmin_dim = rate.argmin(axis=1)
    rows = np.arange(centers.shape[0])
    terms = 1.0 - rate[rows, argmin_dim]
    active = np.flatnonzero(terms > threshold)
    if active.size == 0:
        raise EmptyActiveSetError(
            f"no rule's production term exceeds {threshold}; best is {terms.max():.6g}"
        )
    values = coeffs[active, 0] + coeffs[active, 1:] @ x
    weights = terms[active]
    weight_sum = float(weights.sum())
    output = float(weights @ values / weight_sum)
    return ProductionForward(
        x=x,
        terms=terms,
        argmin_dim=argmin_dim,
        delta_at_min=delta[rows, argmin_dim],
        active=active,
        values=values,
        weight_sum=weight_sum,
        output=output,
    )


def production_backward(
    fwd: ProductionForward,
    residual: float,
    half_left: np.ndarray,
    half_right: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """Gradients for the active rules: (coefficients (k, n+1), centers (k,)).

    The center gradient applies to each active rule's minimizing
    dimension only; all other center partials are 0.
    """
    act = fwd.active
    wa = fwd.terms[act] / fwd.weight_sum
    grad_coeffs = np.empty((act.size, fwd.x.size + 1))
    grad_coeffs[:, 0] = -residual * wa
    grad_coeffs[:, 1:] = grad_coeffs[:, :1] * fwd.x

    # d(term)/d(center) on the branch the input currently sits on:
    # +1/half_right when the input is right of the center, -1/half_left
    # when left of it (ties at the center take the right branch).
    jmin = fwd.argmin_dim[act]
    slope = np.where(
        fwd.delta_at_min[act] >= 0.0,
        1.0 / half_right[act, jmin],
        -1.0 / half_left[act, jmin],
    )
    dY_dterm = (fwd.values - fwd.output) / fwd.weight_sum
    grad_centers = -residual * dY_dterm * slope
    return grad_coeffs, grad_centers


def grad_center_production(
    fwd: ProductionForward,
    half_left: np.ndarray,
    half_right: np.ndarray,
    residual: float,
    rule: int,
    dim: int,
) -> float:
    """Partial of the sample loss w.r.t. one antecedent center.

    Zero for inactive rules and for dimensions not attaining the rule's
    minimum rate.
    """
    pos = np.flatnonzero(fwd.active == rule)
    if pos.size == 0 or fwd.argmin_dim[rule] != dim:
        return 0.0
    _, grad_centers = production_backward(fwd, residual, half_left, half_right)
    return float(grad_centers[pos[0]])


def train_production(rb: RuleBase, data: Dataset, cfg: TrainConfig) -> TrainReport:
    """Identify triangle centers and consequent coefficients by gradient descent.

    The inner loop works on plain floats: at this rule-base scale the
    per-iteration cost is dominated by bookkeeping rather than flops, and
    scalar code keeps the cost proportional to the actual operation count
    (one rate per dimension, consequent updates for active rules only, a
    single center nudge per active rule).  The same math is exposed as
    array functions (`production_forward`/`production_backward`) for
    inspection and gradient testing; a unit test holds the two in
    agreement.
    """
    if rb.kind != TRIANGULAR:
        raise ValueError("the moving-rate scheme needs a triangular rule base")
    if rb.input_dim != data.input_dim:
        raise ValueError(
            f"rule base takes {rb.input_dim} inputs, dataset has {data.input_dim}"
        )
    m, n = len(rb), rb.input_dim
    params = rb.antecedent_params
    half_left = params[:, :, 1] - params[:, :, 0]
    half_right = params[:, :, 2] - params[:, :, 1]
    cen = [[float(params[i, j, 1]) for j in range(n)] for i in range(m)]
    inv_l = (1.0 / half_left).tolist()
    inv_r = (1.0 / half_right).tolist()
    co = [[float(c) for c in row] for row in rb.coefficients]

    target_scale = float(np.abs(data.targets).max()) or 1.0
    loss_unscale = target_scale * target_scale
    rows = [[float(v) for v in r] for r in data.inputs]
    targs = [float(v) / target_scale for v in data.targets]
    n_samples = len(data)
    rng = np.random.default_rng(cfg.seed) if cfg.shuffle else None
    order = list(range(n_samples))

    eta, d0 = cfg.eta, cfg.threshold
    curve: list[tuple[int, float, float]] = []
    epoch_seconds: list[float] = []
    skipped = 0
    terms = [0.0] * m
    jmins = [0] * m
    values = [0.0] * m
    start = time.perf_counter()
    epoch_start = start
    for t in range(1, cfg.iterations + 1):
        pos = (t - 1) % n_samples
        if pos == 0 and rng is not None:
            order = rng.permutation(n_samples).tolist()
        x = rows[order[pos]]
        yd = targs[order[pos]]

        # Rates are left unclamped here: a rate above 1 yields a term
        # below 0, which the strict > threshold test excludes exactly as
        # the clamped form would.
        for i in range(m):
            ci, il, ir = cen[i], inv_l[i], inv_r[i]
            best = float("inf")
            bj = 0
            for j in range(n):
                d = x[j] - ci[j]
                r = d * ir[j] if d >= 0.0 else -d * il[j]
                if r < best:
                    best = r
                    bj = j
            terms[i] = 1.0 - best
            jmins[i] = bj
        active = [i for i in range(m) if terms[i] > d0]
        if not active:
            skipped += 1
        else:
            weight_sum = 0.0
            out_num = 0.0
            for i in active:
                c = co[i]
                y_i = c[0]
                for j in range(n):
                    y_i += c[j + 1] * x[j]
                values[i] = y_i
                weight_sum += terms[i]
                out_num += terms[i] * y_i
            output = out_num / weight_sum
            residual = yd - output
            if (t - 1) % cfg.record_every == 0 or t == cfg.iterations:
                curve.append(
                    (t, loss_unscale * 0.5 * residual * residual,
                     time.perf_counter() - start)
                )
            g = eta * residual / weight_sum
            for i in active:
                c = co[i]
                step = g * terms[i]
                c[0] += step
                for j in range(n):
                    c[j + 1] += step * x[j]
                jm = jmins[i]
                d = x[jm] - cen[i][jm]
                slope = inv_r[i][jm] if d >= 0.0 else -inv_l[i][jm]
                cen[i][jm] += g * (values[i] - output) * slope
        if pos == n_samples - 1 or t == cfg.iterations:
            now = time.perf_counter()
            epoch_seconds.append(now - epoch_start)
            epoch_start = now
    elapsed = time.perf_counter() - start

    centers = np.asarray(cen)
    new_params = np.stack((centers - half_left, centers, centers + half_right), axis=2)
    trained = rb.replace_params(new_params, np.asarray(co) * target_scale)
    predictions, fallbacks = predict_batch(
        trained, data.inputs, method="production", threshold=cfg.threshold,
        fallback_all_rules=True,
    )
    return TrainReport(
        method="production",
        rulebase=trained,
        loss_curve=curve,
        epoch_seconds=epoch_seconds,
        predictions=predictions,
        accuracy=_safe_accuracy(data.targets, predictions),
        elapsed_seconds=elapsed,
        skipped_samples=skipped,
        eval_fallbacks=fallbacks,
        config=cfg,
    )


# --- gaussian scheme ----------------------------------------------------


@dataclass(frozen=True)
class SugenoForward:
    """Record of one forward pass through the product-of-memberships model."""

    x: np.ndarray          # input row (n,)
    diff: np.ndarray       # x_j - a_ij (m, n)
    inv_width: np.ndarray  # 1 / b_ij (m, n)
    weights: np.ndarray    # product of memberships per rule (m,)
    values: np.ndarray     # consequent line value per rule (m,)
    weight_sum: float
    output: float


def sugeno_forward(
    centers: np.ndarray, widths: np.ndarray, coeffs: np.ndarray, x: np.ndarray
) -> SugenoForward:
    diff = x - centers
    inv_width = 1.0 / widths
    weights = np.exp(-(diff * diff) * inv_width).prod(axis=1)
    values = coeffs[:, 0] + coeffs[:, 1:] @ x
    weight_sum = float(weights.sum())
    if weight_sum <= 0.0:
        raise DegenerateWeightsError("all firing weights underflowed to zero")
    output = float(weights @ values / weight_sum)
    return SugenoForward(
        x=x,
        diff=diff,
        inv_width=inv_width,
        weights=weights,
        values=values,
        weight_sum=weight_sum,
        output=output,
    )


def sugeno_backward(
    fwd: SugenoForward, residual: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Gradients (coefficients (m, n+1), centers (m, n), widths (m, n))."""
    wa = fwd.weights / fwd.weight_sum
    grad_coeffs = np.empty((fwd.weights.size, fwd.x.size + 1))
    grad_coeffs[:, 0] = -residual * wa
    grad_coeffs[:, 1:] = grad_coeffs[:, :1] * fwd.x

    common = (-residual * (fwd.values - fwd.output) / fwd.weight_sum * fwd.weights)[:, None]
    grad_centers = common * (2.0 * fwd.diff * fwd.inv_width)
    grad_widths = common * (fwd.diff * fwd.diff) * (fwd.inv_width * fwd.inv_width)
    return grad_coeffs, grad_centers, grad_widths


def train_sugeno(rb: RuleBase, data: Dataset, cfg: TrainConfig) -> TrainReport:
    """Identify gaussian centers, widths, and coefficients by gradient descent.

    Scalar inner loop for the same reason as `train_production`; the
    array functions (`sugeno_forward`/`sugeno_backward`) expose the same
    math for testing.  Every rule fires on every sample, so all three
    parameter groups update each iteration.
    """
    if rb.kind != GAUSSIAN:
        raise ValueError("this scheme needs a gaussian rule base")
    if rb.input_dim != data.input_dim:
        raise ValueError(
            f"rule base takes {rb.input_dim} inputs, dataset has {data.input_dim}"
        )
    m, n = len(rb), rb.input_dim
    cen = rb.antecedent_params[:, :, 0].tolist()
    wid = rb.antecedent_params[:, :, 1].tolist()
    co = [[float(c) for c in row] for row in rb.coefficients]

    target_scale = float(np.abs(data.targets).max()) or 1.0
    loss_unscale = target_scale * target_scale
    rows = [[float(v) for v in r] for r in data.inputs]
    targs = [float(v) / target_scale for v in data.targets]
    n_samples = len(data)
    rng = np.random.default_rng(cfg.seed) if cfg.shuffle else None
    order = list(range(n_samples))

    eta = cfg.eta
    exp = math.exp
    curve: list[tuple[int, float, float]] = []
    epoch_seconds: list[float] = []
    clamps = 0
    weights = [0.0] * m
    values = [0.0] * m
    start = time.perf_counter()
    epoch_start = start
    for t in range(1, cfg.iterations + 1):
        pos = (t - 1) % n_samples
        if pos == 0 and rng is not None:
            order = rng.permutation(n_samples).tolist()
        x = rows[order[pos]]
        yd = targs[order[pos]]

        weight_sum = 0.0
        out_num = 0.0
        for i in range(m):
            a, b, c = cen[i], wid[i], co[i]
            w_i = 1.0
            y_i = c[0]
            for j in range(n):
                d = x[j] - a[j]
                w_i *= exp(-(d * d) / b[j])
                y_i += c[j + 1] * x[j]
            weights[i] = w_i
            values[i] = y_i
            weight_sum += w_i
            out_num += w_i * y_i
        if weight_sum <= 0.0:
            raise DegenerateWeightsError("all firing weights underflowed to zero")
        output = out_num / weight_sum
        residual = yd - output
        if (t - 1) % cfg.record_every == 0 or t == cfg.iterations:
            curve.append(
                (t, loss_unscale * 0.5 * residual * residual,
                 time.perf_counter() - start)
            )
        g = eta * residual / weight_sum
        for i in range(m):
            a, b, c = cen[i], wid[i], co[i]
            step = g * weights[i]
            c[0] += step
            common = g * (values[i] - output) * weights[i]
            for j in range(n):
                c[j + 1] += step * x[j]
                d = x[j] - a[j]
                inv_b = 1.0 / b[j]
                a[j] += common * 2.0 * d * inv_b
                nb = b[j] + common * d * d * inv_b * inv_b
                if nb < WIDTH_FLOOR:
                    nb = WIDTH_FLOOR
                    clamps += 1
                b[j] = nb
        if pos == n_samples - 1 or t == cfg.iterations:
            now = time.perf_counter()
            epoch_seconds.append(now - epoch_start)
            epoch_start = now
    elapsed = time.perf_counter() - start

    trained = rb.replace_params(
        np.stack((np.asarray(cen), np.asarray(wid)), axis=2), np.asarray(co) * target_scale
    )
    predictions, _ = predict_batch(trained, data.inputs, method="sugeno")
    return TrainReport(
        method="sugeno",
        rulebase=trained,
        loss_curve=curve,
        epoch_seconds=epoch_seconds,
        predictions=predictions,
        accuracy=_safe_accuracy(data.targets, predictions),
        elapsed_seconds=elapsed,
        width_clamps=clamps,
        config=cfg,
    )


# --- shared evaluation ----------------------------------------------------

METHODS = ("production", "sugeno", "type-distance")


def predict_batch(
    rb: RuleBase,
    inputs: np.ndarray,
    method: str,
    threshold: float = 0.0,
    fallback_all_rules: bool = False,
) -> tuple[np.ndarray, int]:
    """Predict every row; returns (predictions, fallback count).

    With `fallback_all_rules`, a row that activates no rule is retried at
    threshold 0 (all rules with a positive score) instead of erroring.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r} (choose from {', '.join(METHODS)})")
    inputs = np.asarray(inputs, dtype=np.float64)
    out = np.empty(inputs.shape[0])
    fallbacks = 0
    for i, row in enumerate(inputs):
        if method == "production":
            try:
                out[i] = infer_production(rb, row, threshold).output
            except EmptyActiveSetError:
                if not fallback_all_rules:
                    raise
                fallbacks += 1
                out[i] = infer_production(rb, row, 0.0).output
        elif method == "sugeno":
            out[i] = infer_sugeno(rb, row)
        else:
            out[i] = infer_type_distance(rb, row)
    return out, fallbacks
