"""Set types: membership, moving rates, and the width-aware variant."""

import math

import numpy as np
import pytest

from fuzzident.sets import (
    FuzzyTriangle,
    GaussianSet,
    Singleton,
    TriangularSet,
    input_center,
    moving_rate,
)

ASYM = TriangularSet(-1.0, 1.0, 4.0)  # half-widths 2 (left) and 3 (right)


class TestValidation:
    def test_triangular_needs_strict_ordering(self):
        with pytest.raises(ValueError):
            TriangularSet(0.0, 0.0, 1.0)
        with pytest.raises(ValueError):
            TriangularSet(0.0, 2.0, 1.0)

    def test_gaussian_needs_positive_width(self):
        with pytest.raises(ValueError):
            GaussianSet(0.0, 0.0)
        with pytest.raises(ValueError):
            GaussianSet(0.0, -1.0)

    def test_fuzzy_observation_ordering(self):
        with pytest.raises(ValueError):
            FuzzyTriangle(1.0, 0.0, 2.0)
        assert FuzzyTriangle(1.0, 1.0, 1.0).width == 0.0

    def test_input_center(self):
        assert input_center(Singleton(2.5)) == 2.5
        assert input_center(FuzzyTriangle(0.0, 1.0, 3.0)) == 1.0


class TestMembership:
    def test_anchor_points(self):
        assert ASYM.membership(1.0) == 1.0
        assert ASYM.membership(-1.0) == 0.0
        assert ASYM.membership(4.0) == 0.0
        assert ASYM.membership(0.0) == 0.5    # halfway up the left side
        assert ASYM.membership(2.5) == 0.5    # halfway down the right side

    def test_zero_outside_support(self):
        assert ASYM.membership(-5.0) == 0.0
        assert ASYM.membership(100.0) == 0.0

    def test_gaussian_values(self):
        g = GaussianSet(1.0, 2.0)
        assert g.membership(1.0) == 1.0
        assert g.membership(2.0) == pytest.approx(math.exp(-0.5))
        assert g.membership(0.0) == g.membership(2.0)  # symmetric


class TestMovingRate:
    def test_anchor_points(self):
        assert ASYM.moving_rate(1.0) == 0.0
        assert ASYM.moving_rate(-1.0) == 1.0   # left endpoint
        assert ASYM.moving_rate(4.0) == 1.0    # right endpoint
        assert ASYM.moving_rate(0.0) == 0.5
        assert ASYM.moving_rate(2.5) == 0.5

    def test_clamps_outside_support(self):
        assert ASYM.moving_rate(-50.0) == 1.0
        assert ASYM.moving_rate(50.0) == 1.0

    def test_asymmetry_respected(self):
        # One unit from the center costs 1/2 on the left, 1/3 on the right.
        assert ASYM.moving_rate(0.0) == pytest.approx(0.5)
        assert ASYM.moving_rate(2.0) == pytest.approx(1.0 / 3.0)

    def test_complement_identity_inside_support(self):
        rng = np.random.default_rng(7)
        for _ in range(500):
            c = rng.uniform(-3, 3)
            s = TriangularSet(c - rng.uniform(0.1, 2), c, c + rng.uniform(0.1, 2))
            x = rng.uniform(s.left, s.right)
            if x <= s.left or x >= s.right:
                continue
            assert s.membership(x) + s.moving_rate(x) == pytest.approx(1.0, abs=1e-12)

    def test_monotone_away_from_center(self):
        xs = np.linspace(1.0, 6.0, 50)
        rates = [ASYM.moving_rate(x) for x in xs]
        assert all(b >= a for a, b in zip(rates, rates[1:]))

    def test_dispatcher(self):
        assert moving_rate(ASYM, Singleton(2.0)) == ASYM.moving_rate(2.0)
        obs = FuzzyTriangle(1.5, 2.0, 2.5)
        assert moving_rate(ASYM, obs) == ASYM.moving_rate_fuzzy(obs)


class TestFuzzyMovingRate:
    def test_widens_denominator_on_matching_side(self):
        # Observation centered at 2 (right of ASYM's center), right width 1:
        # rate = (2 - 1) / ((4 - 1) + 1) = 0.25; the left width is ignored.
        obs = FuzzyTriangle(0.0, 2.0, 3.0)
        assert ASYM.moving_rate_fuzzy(obs) == pytest.approx(0.25)
        narrower = FuzzyTriangle(0.0, 2.0, 2.0)
        assert ASYM.moving_rate_fuzzy(narrower) == pytest.approx(1.0 / 3.0)

    def test_left_branch_uses_left_widths(self):
        # Observation at 0 (left of center), left width 2: (1-0)/((1-(-1))+2) = 0.25.
        obs = FuzzyTriangle(-2.0, 0.0, 0.5)
        assert ASYM.moving_rate_fuzzy(obs) == pytest.approx(0.25)

    def test_wider_observation_never_rates_higher(self):
        rng = np.random.default_rng(11)
        for _ in range(300):
            x = rng.uniform(ASYM.left + 0.01, ASYM.right - 0.01)
            w1, w2 = sorted(rng.uniform(0, 2, size=2))
            narrow = FuzzyTriangle(x - w1, x, x + w1)
            wide = FuzzyTriangle(x - w2, x, x + w2)
            assert ASYM.moving_rate_fuzzy(wide) <= ASYM.moving_rate_fuzzy(narrow) + 1e-15

    def test_center_on_or_beyond_support_rates_one(self):
        assert ASYM.moving_rate_fuzzy(FuzzyTriangle(3.0, 4.0, 5.0)) == 1.0
        assert ASYM.moving_rate_fuzzy(FuzzyTriangle(4.0, 6.0, 8.0)) == 1.0
        assert ASYM.moving_rate_fuzzy(FuzzyTriangle(-3.0, -1.0, 0.0)) == 1.0

    def test_zero_width_degenerates_exactly(self):
        rng = np.random.default_rng(13)
        for _ in range(500):
            c = rng.uniform(-3, 3)
            s = TriangularSet(c - rng.uniform(0.1, 2), c, c + rng.uniform(0.1, 2))
            x = rng.uniform(c - 3, c + 3)
            obs = FuzzyTriangle(x, x, x)
            assert s.moving_rate_fuzzy(obs) == s.moving_rate(x)
