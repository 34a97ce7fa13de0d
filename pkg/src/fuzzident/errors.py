"""Exceptions shared by the inference engines and their reference twins."""

from __future__ import annotations


class InferenceError(ArithmeticError):
    """An inference call could not produce an output for this input."""


class EmptyActiveSetError(InferenceError):
    """No rule's production term cleared the activation threshold.

    Raised by the production-term engine when every rule is too far from
    the input; lowering the threshold (or retrying with threshold 0, which
    activates every rule) always resolves it.
    """


class ZeroWeightSumError(InferenceError):
    """Every rule's firing weight is exactly zero, so the weighted average
    of consequents is undefined.  Cannot happen with gaussian antecedents;
    with triangular ones it means the input is outside every rule's support.
    """


class AllDistancesZeroError(InferenceError):
    """The input coincides with every rule's antecedent center vector, so
    distance-weighted interpolation between two or more rules is undefined.
    """


class DegenerateWeightsError(InferenceError):
    """A gradient was requested for a weighted average whose weights sum to
    zero; the average (and hence the gradient) is undefined there.
    """
