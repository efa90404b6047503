"""Ranking map, midpoint orders, patterns, group action, majority rule."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from midhyp.errors import (
    DegenerateConfigError,
    InvalidParameterError,
    TieError,
)
from midhyp.ranking import (
    MidpointOrder,
    Ranking,
    apply_sigma,
    inversions,
    majority_ranking,
    midpoint_order,
    mirror_config,
    normalize_config,
    object_config,
    permute_config,
    rank_at,
    ranking_pattern,
)


def random_config(rng, m, exact=False):
    """Ascending general-position configuration."""
    while True:
        pts = np.sort(rng.standard_normal(m))
        try:
            if exact:
                return object_config([Fraction(x).limit_denominator(10**6) for x in pts])
            return object_config(list(pts))
        except DegenerateConfigError:
            continue


def safe_ideal(rng, config):
    """Random ideal point away from every midpoint."""
    while True:
        y = float(rng.standard_normal()) * 2
        try:
            rank_at(config, y)
            return y
        except TieError:
            continue


class TestRankAt:
    def test_example_m3_extremes(self):
        c = object_config([0, 1, 3])
        assert rank_at(c, Fraction(-10)).perm == (1, 2, 3)  # left of every midpoint
        assert rank_at(c, 100).perm == (3, 2, 1)  # right of every midpoint

    def test_example_decimal(self):
        assert rank_at(object_config([0, 1, 3]), 0.7).perm == (2, 1, 3)

    def test_tie_reports_pair(self):
        c = object_config([0, 1, 3])
        with pytest.raises(TieError) as err:
            rank_at(c, Fraction(1, 2))
        assert err.value.pair == (1, 2)
        with pytest.raises(TieError):
            rank_at(object_config([0.0, 1.0, 3.0]), 2.0)  # midpoint of 2,3

    def test_degenerate_config_rejected(self):
        with pytest.raises(DegenerateConfigError):
            object_config([0, 1, 2, 3])  # x_14 == x_23
        with pytest.raises(DegenerateConfigError):
            object_config([0, 1, 1])
        with pytest.raises(DegenerateConfigError):
            # x_14 and x_23 agree to within the float tie tolerance
            object_config([0.0, 1.0, 2.0, 3.0 + 1e-13])


class TestMidpointOrder:
    def test_examples(self):
        assert midpoint_order(object_config([0, 1, 3])).pairs == ((1, 2), (1, 3), (2, 3))
        assert midpoint_order(object_config([0, 1, 2, 6])).pairs == (
            (1, 2), (1, 3), (2, 3), (1, 4), (2, 4), (3, 4))
        assert midpoint_order(object_config([0, 2, 3, 4])).pairs == (
            (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))

    def test_monotone_for_ascending(self):
        rng = np.random.default_rng(11)
        for m in (3, 4, 5, 6):
            for _ in range(50):
                assert midpoint_order(random_config(rng, m)).is_monotone()

    def test_validation(self):
        with pytest.raises(InvalidParameterError):
            MidpointOrder(((1, 2), (1, 2), (2, 3)))


class TestRankingPattern:
    def test_example_m3(self):
        pattern = ranking_pattern(object_config([0, 1, 3]), verify=True)
        assert [r.perm for r in pattern] == [
            (1, 2, 3), (2, 1, 3), (2, 3, 1), (3, 2, 1)]

    def test_m4_shape_and_extremes(self):
        pattern = ranking_pattern(object_config([0, 2, 3, 7]), verify=True)
        assert len(pattern) == 7
        assert pattern[0].perm == (1, 2, 3, 4)
        assert pattern[-1].perm == (4, 3, 2, 1)

    def test_walk_matches_sampling_oracle(self):
        # verify=True cross-checks the transposition walk against rank_at
        # sampled strictly between consecutive midpoints
        pattern = ranking_pattern(object_config([0, 1, 2, 6]), verify=True)
        assert [r.perm for r in pattern] == [
            (1, 2, 3, 4), (2, 1, 3, 4), (2, 3, 1, 4), (3, 2, 1, 4),
            (3, 2, 4, 1), (3, 4, 2, 1), (4, 3, 2, 1)]

    def test_rejects_non_ascending(self):
        with pytest.raises(InvalidParameterError):
            ranking_pattern(object_config([1, 0, 3]))

    def test_distinct_rankings_and_inversions(self):
        rng = np.random.default_rng(5)
        for m in (3, 4, 5, 6):
            cfg = random_config(rng, m)
            pattern = ranking_pattern(cfg)
            assert len({r.perm for r in pattern}) == len(pattern) == m * (m - 1) // 2 + 1
            assert [inversions(r) for r in pattern] == list(range(len(pattern)))


class TestGroupAction:
    def test_identity_and_transposition(self):
        r = Ranking((1, 2, 3))
        assert apply_sigma((1, 2, 3), r).perm == (1, 2, 3)
        assert apply_sigma((2, 1, 3), r).perm == (2, 1, 3)

    def test_equivariance_random(self):
        rng = np.random.default_rng(17)
        for _ in range(300):
            m = int(rng.integers(3, 7))
            cfg = random_config(rng, m)
            sigma = tuple(rng.permutation(m) + 1)
            y = safe_ideal(rng, cfg)
            assert rank_at(permute_config(sigma, cfg), y) == apply_sigma(sigma, rank_at(cfg, y))

    def test_normalize_config(self):
        cfg, sigma = normalize_config(["3", "0", "1"])
        assert cfg.points == (Fraction(0), Fraction(1), Fraction(3))
        original = object_config(["3", "0", "1"])
        for y in (Fraction(-1), Fraction(7, 10), Fraction(22, 10)):
            assert rank_at(original, y) == apply_sigma(sigma, rank_at(cfg, y))


class TestMirror:
    def test_midpoint_order_reverses(self):
        rng = np.random.default_rng(23)
        for _ in range(100):
            cfg = random_config(rng, int(rng.integers(3, 7)))
            assert midpoint_order(mirror_config(cfg)) == midpoint_order(cfg).reversed_relabeled()

    def test_pattern_reverses(self):
        rng = np.random.default_rng(29)
        for _ in range(50):
            m = int(rng.integers(3, 7))
            cfg = random_config(rng, m)
            pat, mir = ranking_pattern(cfg), ranking_pattern(mirror_config(cfg))
            rho = tuple(m + 1 - k for k in range(1, m + 1))  # object relabeling
            for s, r in enumerate(mir):
                assert r == apply_sigma(rho, pat[len(pat) - 1 - s])


class TestPatternOrderCorrespondence:
    def test_equal_patterns_iff_equal_midpoint_orders(self):
        rng = np.random.default_rng(31)
        for _ in range(60):
            m = int(rng.integers(3, 6))
            a, b = random_config(rng, m), random_config(rng, m)
            same_order = midpoint_order(a) == midpoint_order(b)
            same_pattern = [r.perm for r in ranking_pattern(a)] == [
                r.perm for r in ranking_pattern(b)]
            assert same_order == same_pattern

    def test_affine_image_same_pattern(self):
        rng = np.random.default_rng(37)
        for _ in range(40):
            m = int(rng.integers(3, 7))
            cfg = random_config(rng, m)
            scaled = object_config([3.7 * p + 11.0 for p in cfg.points])
            assert midpoint_order(scaled) == midpoint_order(cfg)
            assert [r.perm for r in ranking_pattern(scaled)] == [
                r.perm for r in ranking_pattern(cfg)]


class TestMajority:
    def test_example(self):
        c = object_config([0, 1, 3])
        got = majority_ranking(c, [Fraction(-1), Fraction(7, 10), Fraction(26, 10)])
        assert got.perm == (2, 1, 3)
        assert got == rank_at(c, Fraction(7, 10))  # median individual

    def test_single_and_identical(self):
        c = object_config([0, 1, 3])
        assert majority_ranking(c, [Fraction(2, 3)]) == rank_at(c, Fraction(2, 3))
        ideals = [Fraction(9, 4)] * 3
        assert majority_ranking(c, ideals) == rank_at(c, Fraction(9, 4))

    def test_even_panel_rejected(self):
        with pytest.raises(InvalidParameterError):
            majority_ranking(object_config([0, 1, 3]), [0.2, 0.9])

    def test_matches_median_random(self):
        rng = np.random.default_rng(41)
        for _ in range(200):
            m = int(rng.integers(3, 7))
            cfg = random_config(rng, m)
            panel = [safe_ideal(rng, cfg) for _ in range(int(rng.choice([3, 5, 7])))]
            med = sorted(panel)[len(panel) // 2]
            assert majority_ranking(cfg, panel) == rank_at(cfg, med)


class TestInversions:
    @given(st.integers(3, 8))
    def test_extremes(self, m):
        assert inversions(Ranking(tuple(range(1, m + 1)))) == 0
        assert inversions(Ranking(tuple(range(m, 0, -1)))) == m * (m - 1) // 2

    def test_simple(self):
        assert inversions(Ranking((2, 1, 3))) == 1

    @given(st.permutations(list(range(1, 7))))
    @settings(max_examples=100)
    def test_reversal_complements(self, perm):
        r = Ranking(tuple(perm))
        rev = Ranking(tuple(reversed(perm)))
        assert inversions(r) + inversions(rev) == 15  # C(6,2)
