"""Fuzzy set types, membership functions, and moving rates.

The moving rate measures how far an observation sits from a set's center,
in units of the set's half-width on that side: 0 at the center, growing
linearly to 1 at the support boundary, and saturating at 1 beyond it.
Inside the support, membership and moving rate are exact complements:
``membership(x) + moving_rate(x) == 1`` for ``left < x < right``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# A moving rate is a plain float, always in [0, 1].
MovingRate = float


@dataclass(frozen=True)
class Singleton:
    """A crisp observation of one input variable."""

    value: float


@dataclass(frozen=True)
class FuzzyTriangle:
    """A triangular fuzzy observation, left <= center <= right.

    A zero-width observation (left == center == right) behaves exactly
    like ``Singleton(center)`` everywhere it is accepted.
    """

    left: float
    center: float
    right: float

    def __post_init__(self):
        if not (self.left <= self.center <= self.right):
            raise ValueError(
                f"fuzzy observation needs left <= center <= right, "
                f"got ({self.left}, {self.center}, {self.right})"
            )

    @property
    def width(self) -> float:
        return self.right - self.left


InputValue = Singleton | FuzzyTriangle


def input_center(value: InputValue) -> float:
    """Crisp representative of an observation (its value or triangle center)."""
    if isinstance(value, Singleton):
        return value.value
    return value.center


@dataclass(frozen=True)
class TriangularSet:
    """Triangular antecedent fuzzy set with strict ``left < center < right``.

    Asymmetric triangles are fully supported; the two half-widths are used
    independently throughout.
    """

    left: float
    center: float
    right: float

    def __post_init__(self):
        if not (self.left < self.center < self.right):
            raise ValueError(
                f"degenerate triangular set: need left < center < right, "
                f"got ({self.left}, {self.center}, {self.right})"
            )

    def membership(self, x: float) -> float:
        """Piecewise-linear membership: 1 at the center, 0 at and outside the support."""
        if x <= self.left or x >= self.right:
            return 0.0
        if x >= self.center:
            return (self.right - x) / (self.right - self.center)
        return (x - self.left) / (self.center - self.left)

    def moving_rate(self, x: float) -> MovingRate:
        """Moving rate of a crisp observation.

        Linear in the distance from the center on each side, exactly 1 at
        the support endpoints and everywhere outside them.
        """
        if x >= self.center:
            return min(1.0, (x - self.center) / (self.right - self.center))
        return min(1.0, (self.center - x) / (self.center - self.left))

    def moving_rate_fuzzy(self, obs: FuzzyTriangle) -> MovingRate:
        """Moving rate of a triangular observation.

        The observation's half-width on the matching side is added to the
        set's half-width in the denominator:

            (obs.center - center) / ((right - center) + (obs.right - obs.center))

        on the right branch, and symmetrically with the left half-widths on
        the left branch.  This is the unique width-aware form that collapses
        to `moving_rate` when the observation width is 0.  An observation
        whose center lies on or beyond a support endpoint rates 1.
        """
        x = obs.center
        if x <= self.left or x >= self.right:
            return 1.0
        if x >= self.center:
            denom = (self.right - self.center) + (obs.right - obs.center)
            return min(1.0, (x - self.center) / denom)
        denom = (self.center - self.left) + (obs.center - obs.left)
        return min(1.0, (self.center - x) / denom)


@dataclass(frozen=True)
class GaussianSet:
    """Gaussian antecedent fuzzy set: membership ``exp(-(x - center)^2 / width)``.

    ``width`` is the squared-scale denominator (units of x squared), not a
    standard deviation; it must be strictly positive.
    """

    center: float
    width: float

    def __post_init__(self):
        if not self.width > 0:
            raise ValueError(f"gaussian width must be positive, got {self.width}")

    def membership(self, x: float) -> float:
        d = x - self.center
        return math.exp(-(d * d) / self.width)


def moving_rate(fset: TriangularSet, value: InputValue) -> MovingRate:
    """Moving rate of a crisp or fuzzy observation against a triangular set."""
    if isinstance(value, Singleton):
        return fset.moving_rate(value.value)
    return fset.moving_rate_fuzzy(value)
