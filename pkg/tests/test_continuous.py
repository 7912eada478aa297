"""Continuous relaxation: decomposition, p_infinity, fairness, corrections."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from guesswho.continuous import (
    ContinuousRegionKind,
    ContinuousState,
    correction_identity,
    decompose,
    equal_pool_advantage,
    escape_probability,
    fair_factor,
    p_infinity,
    p_infinity_exact,
)
from guesswho.game import RegionKind, classify, closed_form_value

pools = st.floats(min_value=1.0000001, max_value=1e12, allow_nan=False, allow_infinity=False)


class TestDecompose:
    def test_examples(self):
        r = decompose(5.0, 4.0)
        assert r.kind is ContinuousRegionKind.WEEDS
        assert r.level == 1
        assert r.alpha == 2.5
        assert r.beta == 2.0
        r = decompose(5.0, 5.0)
        assert r.kind is ContinuousRegionKind.UPPER_HAND
        assert r.level == 2
        assert r.alpha == 1.25
        r = decompose(4.0, 2.0)
        assert (r.kind, r.level, r.alpha, r.beta) == (ContinuousRegionKind.WEEDS, 0, 4.0, 2.0)

    def test_powers_of_two_sit_on_the_closed_edge(self):
        # beta = 2 exactly, never beta = 1
        r = decompose(16.0, 8.0)
        assert r.level == 2 and r.beta == 2.0
        r = decompose(2.0, 2.0)
        assert r.kind is ContinuousRegionKind.UPPER_HAND
        assert r.level == 0 and r.alpha == 2.0 and r.beta == 2.0

    @given(pools, pools)
    @settings(max_examples=300)
    def test_coordinates_land_in_their_boxes(self, x, y):
        r = decompose(x, y)
        if r.kind is ContinuousRegionKind.WEEDS:
            assert r.alpha > 2.0
            assert 1.0 < r.beta <= 2.0
        else:
            assert 1.0 < r.alpha <= 2.0
            assert r.beta > 1.0
        # the decomposition is exact: scaling back recovers the inputs
        assert math.ldexp(r.alpha, r.level) == x
        assert math.ldexp(r.beta, r.level) == y

    def test_agrees_with_discrete_classification_on_the_lattice(self):
        for n in range(2, 200):
            for m in range(2, 200):
                c = decompose(float(n), float(m))
                d = classify(n, m)
                expected = (
                    RegionKind.WEEDS
                    if c.kind is ContinuousRegionKind.WEEDS
                    else RegionKind.UPPER_HAND
                )
                assert d.kind is expected, (n, m)
                assert d.level == c.level, (n, m)

    def test_rejects_out_of_domain(self):
        for bad in (1.0, 0.5, 0.0, -3.0, math.inf, math.nan):
            with pytest.raises(ValueError):
                decompose(bad, 4.0)
            with pytest.raises(ValueError):
                decompose(4.0, bad)

    def test_state_type_validates(self):
        ContinuousState(1.5, 9.75)
        with pytest.raises(ValueError):
            ContinuousState(1.0, 5.0)


class TestPInfinity:
    def test_frozen_examples(self):
        assert p_infinity(4.0, 2.0) == pytest.approx(1 / 3, abs=1e-15)
        assert p_infinity(8.0, 4.0) == pytest.approx(1 / 3, abs=1e-15)
        assert p_infinity(5.0, 4.0) == pytest.approx(8 / 15, abs=1e-15)
        assert p_infinity(5.0, 5.0) == pytest.approx(47 / 75, abs=1e-15)

    def test_exact_rational_on_the_lattice(self):
        assert p_infinity_exact(4, 2) == Fraction(1, 3)
        assert p_infinity_exact(8, 4) == Fraction(1, 3)
        assert p_infinity_exact(5, 4) == Fraction(8, 15)
        assert p_infinity_exact(5, 5) == Fraction(47, 75)
        assert p_infinity_exact(7, 4) == Fraction(8, 21)
        for n in range(2, 80):
            for m in range(2, 80):
                assert p_infinity(float(n), float(m)) == pytest.approx(
                    float(p_infinity_exact(n, m)), abs=1e-13
                )

    @given(pools, pools, st.integers(-20, 20))
    @settings(max_examples=300)
    def test_scale_invariance_is_exact(self, x, y, j):
        scale = math.ldexp(1.0, j)
        if x * scale <= 1.0 or y * scale <= 1.0 or x * scale > 1e300 or y * scale > 1e300:
            return
        assert p_infinity(x * scale, y * scale) == p_infinity(x, y)

    @given(pools, pools)
    @settings(max_examples=300)
    def test_range_is_the_open_unit_interval(self, x, y):
        assert 0.0 < p_infinity(x, y) < 1.0

    def test_continuous_across_the_alpha_boundary(self):
        # x = 2^(k+1): the upper-hand value must equal the weeds formula's
        # alpha -> 2 limit at the same level
        for k in range(0, 8):
            x = float(2 ** (k + 1))
            for t in (1.062, 1.25, 1.5, 1.875, 2.0):
                y = math.ldexp(t, k)
                weeds_limit = 2 ** (k + 1) / x - (2 / 3) * 2 ** (2 * k + 1) / (x * y)
                assert p_infinity(x, y) == pytest.approx(weeds_limit, abs=1e-12)

    def test_continuous_across_the_level_boundary(self):
        # y = 2^(k+1) inside the weeds: level k from below, level k+1 at beta -> 1
        for k in range(0, 8):
            y = float(2 ** (k + 1))
            for t in (2.03125, 2.5, 3.0, 5.0):
                x = math.ldexp(t, k + 1)  # stay in the weeds for both levels
                above = 2 ** (k + 2) / x - (2 / 3) * 2 ** (2 * k + 3) / (x * y)
                assert p_infinity(x, y) == pytest.approx(above, abs=1e-12)

    def test_rejects_out_of_domain(self):
        with pytest.raises(ValueError):
            p_infinity(1.0, 4.0)
        with pytest.raises(ValueError):
            p_infinity_exact(1, 4)


class TestEscapeProbability:
    def test_frozen_example(self):
        assert escape_probability(8 / 3) == pytest.approx(3 / 4, abs=1e-15)
        assert escape_probability(4.0) == 0.5

    def test_decreasing_in_alpha(self):
        values = [escape_probability(a) for a in (2.01, 2.5, 3.0, 5.0, 50.0)]
        assert values == sorted(values, reverse=True)

    def test_rejects_non_weeds_alpha(self):
        for bad in (2.0, 1.5, 0.0, -1.0, math.inf, math.nan):
            with pytest.raises(ValueError):
                escape_probability(bad)


class TestCorrectionIdentity:
    def test_frozen_examples(self):
        assert correction_identity(7, 4) == Fraction(-1, 42)
        assert correction_identity(5, 5) == Fraction(4, 75)
        assert correction_identity(4, 2) == Fraction(-1, 12)
        assert correction_identity(16, 16) == Fraction(1, 192)

    def test_sign_tracks_the_region(self):
        for n in range(2, 61):
            for m in range(2, 61):
                gap = correction_identity(n, m)  # raises if the identity breaks
                if classify(n, m).kind is RegionKind.WEEDS:
                    assert gap == Fraction(-2, 3 * n * m)
                else:
                    assert gap == Fraction(4, 3 * n * m)

    def test_gap_really_separates_the_two_functions(self):
        assert closed_form_value(7, 4) - p_infinity_exact(7, 4) == Fraction(-1, 42)

    def test_rejects_terminals(self):
        with pytest.raises(ValueError):
            correction_identity(1, 5)


class TestEqualPoolAdvantage:
    def test_endpoints_and_minimum(self):
        assert equal_pool_advantage(2.0) == pytest.approx(2 / 3, abs=1e-15)
        assert equal_pool_advantage(4 / 3) == pytest.approx(5 / 8, abs=1e-12)
        assert equal_pool_advantage(1.0000001) == pytest.approx(2 / 3, abs=1e-6)

    def test_band_and_argmin_on_a_dense_grid(self):
        steps = 4096
        values = [(1.0 + i / steps, equal_pool_advantage(1.0 + i / steps))
                  for i in range(1, steps + 1)]
        assert all(5 / 8 - 1e-9 <= v <= 2 / 3 + 1e-9 for _, v in values)
        argmin = min(values, key=lambda pair: pair[1])[0]
        assert abs(argmin - 4 / 3) <= 1.0 / steps

    def test_matches_p_infinity_at_equal_pools(self):
        for t in (1.03125, 1.25, 4 / 3, 1.5, 1.75, 2.0):
            for k in (0, 1, 5):
                x = math.ldexp(t, k)
                assert equal_pool_advantage(t) == pytest.approx(
                    p_infinity(x, x), abs=1e-13)

    def test_rejects_out_of_domain(self):
        for bad in (1.0, 2.0000001, 0.5, math.nan):
            with pytest.raises(ValueError):
                equal_pool_advantage(bad)


def analytic_fair_factor(beta: float) -> float:
    """Root of p_infinity(c*beta, beta) = 1/2 in closed form.

    Solving the weeds branch 2/(c b) - 4/(3 c b^2) = 1/2 gives
    c = 4/b - 8/(3 b^2), valid while c*b > 2, i.e. b > 4/3; the upper-hand
    branch 1 - 1/b + 2/(3 c b^2) = 1/2 gives c = 4/(3 b (2 - b)) for the
    rest.  Both meet at b = 4/3, c = 3/2.
    """
    if beta > 4 / 3:
        return 4 / beta - 8 / (3 * beta * beta)
    return 4 / (3 * beta * (2 - beta))


class TestFairFactor:
    def test_endpoints(self):
        assert fair_factor(2.0).factor == pytest.approx(4 / 3, abs=2e-12)
        assert fair_factor(4 / 3).factor == pytest.approx(3 / 2, abs=2e-12)

    def test_matches_the_analytic_root(self):
        steps = 256
        for i in range(1, steps + 1):
            beta = 1.0 + i / steps
            result = fair_factor(beta)
            assert result.factor == pytest.approx(analytic_fair_factor(beta), abs=1e-11)
            assert result.p_at_factor == pytest.approx(0.5, abs=1e-11)

    def test_band(self):
        for i in range(1, 513):
            beta = 1.0 + i / 512
            assert 4 / 3 - 1e-9 <= fair_factor(beta).factor <= 3 / 2 + 1e-9

    @given(st.floats(min_value=1.001, max_value=2.0))
    @settings(max_examples=100)
    def test_root_property(self, beta):
        c = fair_factor(beta).factor
        assert p_infinity(c * 2 * beta, 2 * beta) == pytest.approx(0.5, abs=1e-11)

    def test_rejects_out_of_domain(self):
        for bad in (1.0, 2.1, 0.0, math.nan):
            with pytest.raises(ValueError):
                fair_factor(bad)
